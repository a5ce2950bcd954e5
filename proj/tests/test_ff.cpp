#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "dlkit/error.hpp"
#include "dlkit/ff/field.hpp"
#include "dlkit/ff/numtheory.hpp"
#include "dlkit/ff/residue.hpp"

using namespace dlkit;
using namespace dlkit::ff;

TEST_CASE("prime field inverse matches brute force") {
  auto F = FieldSpec::prime(7);
  CHECK(F.inv(3) == 5);
  for (u64 a = 1; a < 7; ++a) {
    u64 brute = 0;
    for (u64 x = 1; x < 7; ++x) if (a * x % 7 == 1) brute = x;
    CHECK(F.inv(a) == brute);
  }
  CHECK_THROWS_AS(F.inv(0), Error);
}

TEST_CASE("F4 multiplication") {
  auto F = FieldSpec::binary(2, 0b111);
  CHECK(F.mul(0b10, 0b10) == 0b11);
  CHECK(FieldSpec::binary(2) == F);
}

TEST_CASE("field_arith checks specs") {
  auto F = FieldSpec::prime(7);
  FieldElement a(F, 3), one(F, 1);
  CHECK(field_arith(a, one, FieldOp::mul) == a);
  CHECK(field_arith(a, one, FieldOp::inv).value() == 5);
  CHECK(field_arith(a, FieldElement(F, 6), FieldOp::pow).value() == 1);
  FieldElement b(FieldSpec::prime(11), 3);
  CHECK_THROWS_AS(a + b, Error);
  try {
    (void)field_arith(a, FieldElement(F, 0), FieldOp::div);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivisionByZero);
  }
}

TEST_CASE("CRT examples") {
  std::vector<Residue> r1{{3, 4}, {1, 3}};
  CHECK(crt_combine(r1) == Residue(7, 12));
  std::vector<Residue> r2{{0, 5}};
  CHECK(crt_combine(r2) == Residue(0, 5));
  std::vector<Residue> r3{{1, 2}, {2, 3}, {3, 5}};
  CHECK(crt_combine(r3) == Residue(23, 30));
  std::vector<Residue> bad{{1, 4}, {1, 6}};
  CHECK_THROWS_AS(crt_combine(bad), Error);
}

TEST_CASE("CRT agrees with exhaustive search") {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<Residue> rs{{rng.below(7), 7}, {rng.below(9), 9}, {rng.below(10), 10}};
    auto c = crt_combine(rs);
    int hits = 0;
    for (int x = 0; x < 630; ++x) {
      if (x % 7 == rs[0].value() && x % 9 == rs[1].value() && x % 10 == rs[2].value()) {
        ++hits;
        CHECK(c.value() == x);
      }
    }
    CHECK(hits == 1);
  }
}

TEST_CASE("random_element is reproducible and uniform") {
  auto F = FieldSpec::prime(7);
  Rng a(42), b(42);
  for (int i = 0; i < 20; ++i) CHECK(random_element(F, a) == random_element(F, b));
  Rng r(1);
  const int n = 10000;
  std::vector<int> counts(7);
  for (int i = 0; i < n; ++i) counts[random_element(F, r).value()]++;
  const double mean = n / 7.0, sigma = std::sqrt(n * (1.0 / 7) * (6.0 / 7));
  for (int c : counts) CHECK(std::abs(c - mean) < 5 * sigma);
  auto F2 = FieldSpec::prime(2);
  for (int i = 0; i < 100; ++i) CHECK(random_element(F2, r).value() <= 1);
}

static void ring_axioms(const FieldSpec& F, Rng& rng) {
  for (int i = 0; i < 1000; ++i) {
    u64 a = F.random(rng), b = F.random(rng), c = F.random(rng);
    CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
    CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
    CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
    if (a) CHECK(F.mul(a, F.inv(a)) == 1);
  }
}

TEST_CASE("ring axioms") {
  Rng rng(9);
  ring_axioms(FieldSpec::prime(7), rng);
  ring_axioms(FieldSpec::prime(1000003), rng);
  ring_axioms(FieldSpec::prime((u64{1} << 61) - 1), rng);
  ring_axioms(FieldSpec::binary(8), rng);
  ring_axioms(FieldSpec::binary(31), rng);
  ring_axioms(FieldSpec::binary(61), rng);
}

TEST_CASE("Frobenius is the identity after m squarings") {
  Rng rng(3);
  for (unsigned m : {2u, 8u, 17u, 31u, 62u}) {
    auto F = FieldSpec::binary(m);
    for (int i = 0; i < 50; ++i) {
      u64 a = F.random(rng), x = a;
      for (unsigned k = 0; k < m; ++k) x = F.sqr(x);
      CHECK(x == a);
      CHECK(F.sqr(F.sqrt_char2(a)) == a);
    }
  }
}

TEST_CASE("canonical serialization") {
  auto F = FieldSpec::binary(8);
  std::set<std::string> seen;
  for (u64 v = 0; v < 256; ++v) seen.insert(FieldElement(F, v).serialize());
  CHECK(seen.size() == 256);
  CHECK(FieldElement(F, 5).serialize() == FieldElement(F, 5).serialize());
}

TEST_CASE("field spec text form") {
  auto F = FieldSpec::parse("binary:31:0x80000009");
  CHECK(F.degree() == 31);
  CHECK(F.modulus() == 0x80000009ULL);
  CHECK(FieldSpec::parse(F.to_string()) == F);
  CHECK(FieldSpec::parse("prime:7") == FieldSpec::prime(7));
  CHECK_THROWS_AS(FieldSpec::parse("prime:8"), Error);
  CHECK_THROWS_AS(FieldSpec::parse("binary:4:0x1f0"), Error);
  // least irreducible defaults
  CHECK(FieldSpec::binary(8).modulus() == 0x11b);
  CHECK(FieldSpec::binary(31).modulus() == 0x80000009ULL);
}

TEST_CASE("number theory helpers") {
  CHECK(is_prime(1000003));
  CHECK(!is_prime(1000001));
  auto f = factorize((u64{1} << 31) - 1);
  CHECK(f.size() == 1);
  auto g = factorize(255);
  CHECK(g == std::vector<std::pair<u64, unsigned>>{{3, 1}, {5, 1}, {17, 1}});
  auto h = factorize(4611686018427387847ULL);
  u64 prod = 1;
  for (auto [p, e] : h) for (unsigned i = 0; i < e; ++i) prod *= p;
  CHECK(prod == 4611686018427387847ULL);
  CHECK(solve_linear_congruence(6, 4, 10, 10) == std::vector<u64>{4, 9});
}
