#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dlkit/error.hpp"
#include "dlkit/poly/factor.hpp"

using namespace dlkit;
using namespace dlkit::poly;
using dlkit::ff::Rng;

namespace {

Polynomial P(const FieldSpec& F, const char* s) { return Polynomial::parse(F, s); }

Polynomial random_poly(const FieldSpec& F, int deg, Rng& rng) {
  std::vector<u64> c(deg + 1);
  for (auto& x : c) x = F.random(rng);
  if (c.back() == 0) c.back() = 1;
  return Polynomial(F, c);
}

int mobius(int n) {
  int r = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      r = -r;
    }
  }
  return n > 1 ? -r : r;
}

long long necklace(long long q, int k) {
  long long s = 0;
  for (int d = 1; d <= k; ++d) {
    if (k % d) continue;
    long long qd = 1;
    for (int i = 0; i < d; ++i) qd *= q;
    s += mobius(k / d) * qd;
  }
  return s / k;
}

}  // namespace

TEST_CASE("poly_arith examples") {
  auto F7 = FieldSpec::prime(7);
  auto a = P(F7, "6,0,1"), b = P(F7, "6,1");
  CHECK(poly_arith(a, b, PolyOp::gcd).first == b);
  CHECK(poly_arith(a, Polynomial::constant(F7, 1), PolyOp::mul).first == a);
  auto [q, r] = divrem(P(F7, "0,0,0,1"), P(F7, "0,0,1"));
  CHECK(q == Polynomial::x(F7));
  CHECK(r.is_zero());
  CHECK_THROWS_AS(divrem(a, Polynomial(F7)), Error);
  CHECK(P(F7, "1,1,0,1").to_string() == "1,1,0,1");
}

TEST_CASE("divrem reconstructs and xgcd is a Bezout identity") {
  Rng rng(11);
  for (auto F : {FieldSpec::prime(3), FieldSpec::prime(101), FieldSpec::binary(8)}) {
    for (int i = 0; i < 100; ++i) {
      auto a = random_poly(F, 1 + rng.below(15), rng);
      auto b = random_poly(F, 1 + rng.below(8), rng);
      auto [q, r] = divrem(a, b);
      CHECK(q * b + r == a);
      CHECK(r.degree() < b.degree());
      auto x = xgcd(a, b);
      CHECK(x.s * a + x.t * b == x.g);
      CHECK(x.g == gcd(a, b));
      CHECK((a % x.g).is_zero());
    }
  }
}

TEST_CASE("factor examples over F2") {
  auto F2 = FieldSpec::prime(2);
  Rng rng(1);
  auto f1 = factor(P(F2, "0,1,1"), rng);
  REQUIRE(f1.factors.size() == 2);
  CHECK(f1.factors[0].poly == P(F2, "0,1"));
  CHECK(f1.factors[1].poly == P(F2, "1,1"));
  auto f2 = factor(P(F2, "1,1,1"), rng);
  REQUIRE(f2.factors.size() == 1);
  CHECK(f2.factors[0].exponent == 1);
  auto f3 = factor(P(F2, "0,1,0,0,1"), rng);
  REQUIRE(f3.factors.size() == 3);
  CHECK(f3.factors[2].poly == P(F2, "1,1,1"));
  CHECK_THROWS_AS(factor(Polynomial(F2), rng), Error);
}

TEST_CASE("is_irreducible examples") {
  auto F2 = FieldSpec::prime(2);
  CHECK(is_irreducible(P(F2, "1,1,1")));
  CHECK(!is_irreducible(P(F2, "1,0,1")));
  CHECK(is_irreducible(Polynomial::x(FieldSpec::prime(7))));
}

TEST_CASE("enumerate_irreducibles examples") {
  auto F2 = FieldSpec::prime(2);
  auto l2 = enumerate_irreducibles(F2, 2);
  REQUIRE(l2.size() == 3);
  CHECK(l2[0] == P(F2, "0,1"));
  CHECK(l2[1] == P(F2, "1,1"));
  CHECK(l2[2] == P(F2, "1,1,1"));
  CHECK(enumerate_irreducibles(F2, 4).size() == 8);
  auto l3 = enumerate_irreducibles(FieldSpec::prime(3), 1);
  REQUIRE(l3.size() == 3);
  CHECK(l3[2] == P(FieldSpec::prime(3), "2,1"));
  CHECK_THROWS_AS(enumerate_irreducibles(FieldSpec::prime(101), 6, 1'000'000), Error);
}

TEST_CASE("irreducible counts match the necklace formula") {
  for (long long q : {2, 3, 5}) {
    const int maxk = 8;
    auto all = enumerate_irreducibles(FieldSpec::prime(q), maxk);
    for (int k = 1; k <= maxk; ++k) {
      long long c = 0;
      for (const auto& p : all) c += p.degree() == k;
      CHECK_MESSAGE(c == necklace(q, k), "q=" << q << " k=" << k);
    }
  }
  auto F4 = FieldSpec::binary(2);
  auto l = enumerate_irreducibles(F4, 3);
  for (int k = 1; k <= 3; ++k) {
    long long c = 0;
    for (const auto& p : l) c += p.degree() == k;
    CHECK(c == necklace(4, k));
  }
}

TEST_CASE("smooth_part examples") {
  auto F2 = FieldSpec::prime(2);
  Rng rng(2);
  auto s = smooth_part(P(F2, "0,1,1"), 1, rng);
  REQUIRE(s.has_value());
  CHECK(s->factors.size() == 2);
  CHECK(!smooth_part(P(F2, "1,1,1"), 1, rng).has_value());
  auto one = smooth_part(P(F2, "1"), 1, rng);
  REQUIRE(one.has_value());
  CHECK(one->factors.empty());
  CHECK(one->unit == 1);
}

TEST_CASE("factor round trip and smoothness agreement") {
  Rng rng(7);
  for (auto F : {FieldSpec::prime(2), FieldSpec::prime(3), FieldSpec::binary(8)}) {
    for (int i = 0; i < 1000; ++i) {
      auto f = random_poly(F, 1 + rng.below(40), rng);
      if (i % 5 == 0) f = f * f * random_poly(F, 2, rng);
      auto fac = factor(f, rng);
      CHECK(fac.expand() == f);
      for (std::size_t j = 0; j < fac.factors.size(); ++j) {
        if (i % 20 == 0) CHECK(is_irreducible(fac.factors[j].poly));
        if (j) CHECK(fac.factors[j - 1].poly < fac.factors[j].poly);
      }
      unsigned bound = 1 + rng.below(6);
      auto sp = smooth_part(f, bound, rng);
      bool expect = fac.max_degree() <= static_cast<int>(bound);
      CHECK(sp.has_value() == expect);
      CHECK(is_smooth(f, bound) == expect);
      if (sp) CHECK(sp->expand() == f);
    }
  }
}

TEST_CASE("roots") {
  auto F = FieldSpec::prime(101);
  Rng rng(3);
  auto f = P(F, "0,1") * P(F, "100,1") * P(F, "5,1") * P(F, "1,0,1");  // x(x-1)(x+5)(x^2+1)
  auto r = roots(f, rng);
  for (u64 x : r) CHECK(f.eval(x) == 0);
  u64 brute = 0;
  for (u64 x = 0; x < 101; ++x) brute += f.eval(x) == 0;
  CHECK(r.size() == brute);
  auto G = FieldSpec::binary(8);
  auto g = P(G, "3,1") * P(G, "200,1") * P(G, "7,0,1");
  auto rg = roots(g, rng);
  brute = 0;
  for (u64 x = 0; x < 256; ++x) brute += g.eval(x) == 0;
  CHECK(rg.size() == brute);
}
