#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "dlkit/curve/curve.hpp"
#include "dlkit/curve/zeta.hpp"
#include "dlkit/error.hpp"
#include "dlkit/generic/solvers.hpp"

using namespace dlkit;
using namespace dlkit::curve;
using dlkit::ff::Rng;

namespace {

const FieldSpec F7 = FieldSpec::prime(7);

Polynomial P(const FieldSpec& k, std::vector<u64> c) { return Polynomial(k, std::move(c)); }

HyperellipticCurve f7_curve() { return HyperellipticCurve(2, P(F7, {0, 1, 0, 0, 0, 1}), Polynomial(F7)); }

// y^2 + (X^2 + X) y = X^5 + X^3 + 1 over F_8.
HyperellipticCurve f8_curve() {
  FieldSpec k = FieldSpec::binary(3);
  return HyperellipticCurve(2, P(k, {1, 0, 0, 1, 0, 1}), P(k, {0, 1, 1}));
}

HyperellipticCurve odd_genus3() {
  FieldSpec k = FieldSpec::prime(101);
  return HyperellipticCurve(3, P(k, {7, 3, 0, 5, 1, 0, 0, 1}), P(k, {0, 1}));
}

std::vector<HyperellipticCurve> test_curves() {
  return {f7_curve(), f8_curve(), odd_genus3(),
          HyperellipticCurve(2, P(FieldSpec::prime(1009), {3, 1, 4, 1, 5, 1}), Polynomial(FieldSpec::prime(1009))),
          HyperellipticCurve(3, P(FieldSpec::binary(5), {1, 2, 0, 3, 0, 0, 0, 1}), P(FieldSpec::binary(5), {1, 0, 1, 1}))};
}

}  // namespace

TEST_CASE("cantor examples on y^2 = x^5 + x over F_7") {
  auto C = f7_curve();
  Divisor a = make_divisor(C, P(F7, {0, 1}), Polynomial(F7));
  Divisor b = make_divisor(C, P(F7, {6, 1}), P(F7, {3}));
  Divisor s = cantor_add(C, a, b);
  CHECK(s.u == P(F7, {0, 6, 1}));
  CHECK(s.v == P(F7, {0, 3}));
  CHECK(cantor_add(C, s, identity(C)) == s);
  CHECK(cantor_add(C, s, negate(C, s)).is_identity());
  CHECK(scalar_mul(C, s, 0).is_identity());
  CHECK_THROWS_AS(make_divisor(C, P(F7, {1, 1}), P(F7, {1})), Error);
}

TEST_CASE("decompose examples") {
  auto C = f7_curve();
  Rng rng(3);
  auto D = make_divisor(C, P(F7, {0, 6, 1}), P(F7, {0, 3}));
  auto fac = decompose(C, D, 1, rng);
  REQUIRE(fac);
  REQUIRE(fac->parts.size() == 2);
  CHECK(fac->parts[0].first.u == P(F7, {0, 1}));
  CHECK(fac->parts[0].first.v.is_zero());
  CHECK(fac->parts[1].first.u == P(F7, {6, 1}));
  CHECK(fac->parts[1].first.v == P(F7, {3}));
  CHECK(decompose(C, identity(C), 1, rng)->parts.empty());
  // An irreducible quadratic u.
  bool found = false;
  for (const auto& E : enumerate_divisors(C)) {
    if (E.u.degree() == 2 && poly::is_irreducible(E.u)) {
      CHECK_FALSE(decompose(C, E, 1, rng));
      CHECK(decompose(C, E, 2, rng));
      found = true;
      break;
    }
  }
  CHECK(found);
}

TEST_CASE("curve validation and file format") {
  CHECK_THROWS_AS(HyperellipticCurve(2, P(F7, {0, 0, 0, 0, 0, 1}), Polynomial(F7)), Error);  // x^5 not squarefree
  CHECK_THROWS_AS(HyperellipticCurve(2, P(F7, {0, 1, 0, 0, 2}), Polynomial(F7)), Error);     // wrong degree
  FieldSpec k = FieldSpec::binary(3);
  CHECK_THROWS_AS(HyperellipticCurve(2, P(k, {1, 0, 0, 1, 0, 1}), Polynomial(k)), Error);  // h = 0 in char 2
  // y^2 + X y = X^5: singular at the origin.
  CHECK_THROWS_AS(HyperellipticCurve(2, P(k, {0, 0, 0, 0, 0, 1}), P(k, {0, 1})), Error);
  auto C = HyperellipticCurve::parse("# test curve\nfield=prime:10007\ngenus=3\nf=5,0,1,0,0,0,0,1\n");
  CHECK(C.genus() == 3);
  CHECK(C.q() == 10007);
  auto D = HyperellipticCurve::parse(f8_curve().to_text());
  CHECK(D.f() == f8_curve().f());
  CHECK(D.h() == f8_curve().h());
  CHECK_THROWS_AS(HyperellipticCurve::parse("field=prime:7\nf=1,1\n"), Error);
}

TEST_CASE("Weil interval and exhaustive order oracle") {
  auto w = weil_interval(7, 2);
  CHECK(w.lo == 8);
  CHECK(w.hi == 176);
  for (const auto& C : {f7_curve(), f8_curve()}) {
    auto all = enumerate_divisors(C);
    for (const auto& D : all) CHECK(is_valid(C, D));
    u64 N = jacobian_order(C);
    CHECK(all.size() == N);
    auto wi = weil_interval(C.q(), C.genus());
    CHECK(N >= wi.lo);
    CHECK(N <= wi.hi);
  }
}

TEST_CASE("elliptic sanity") {
  for (u64 p : {101, 1009, 10007}) {
    FieldSpec k = FieldSpec::prime(p);
    u64 b = 5;
    while (gcd(P(k, {b, 2, 0, 1}), P(k, {2, 0, 3})).degree() > 0) ++b;
    HyperellipticCurve E(1, P(k, {b, 2, 0, 1}), Polynomial(k));
    long long t = static_cast<long long>(p) + 1 - static_cast<long long>(jacobian_order(E));
    CHECK(static_cast<double>(t * t) <= 4.0 * static_cast<double>(p));
  }
}

TEST_CASE("order annihilates random divisors") {
  for (const auto& C : test_curves()) {
    u64 N = jacobian_order(C);
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
      Divisor D = random_divisor(C, rng);
      REQUIRE(is_valid(C, D));
      CHECK(scalar_mul(C, D, static_cast<long long>(N)).is_identity());
      CHECK(scalar_mul(C, D, 2) == cantor_add(C, D, D));
    }
  }
}

TEST_CASE("interval search agrees with full zeta order") {
  auto C = odd_genus3();
  u64 full = jacobian_order(C);
  JacobianOrderOptions opt;
  opt.count_cap = 101 * 101;
  auto rep = jacobian_order_report(C, opt);
  CHECK_FALSE(rep.from_zeta_only);
  CHECK(rep.counts.size() == 2);
  CHECK(rep.order == full);
  opt.count_cap = 101;
  CHECK(jacobian_order(C, opt) == full);
  opt.cap = 1000;
  CHECK_THROWS_AS(jacobian_order(C, opt), Error);
}

TEST_CASE("group axioms on random triples") {
  for (const auto& C : test_curves()) {
    Rng rng(5);
    const int triples = C.q() == 1009 ? 1000 : 150;
    for (int i = 0; i < triples; ++i) {
      Divisor a = random_divisor_direct(C, rng), b = random_divisor_direct(C, rng), c = random_divisor(C, rng);
      Divisor ab = cantor_add(C, a, b);
      REQUIRE(is_valid(C, ab));
      CHECK(ab == cantor_add(C, b, a));
      CHECK(cantor_add(C, ab, c) == cantor_add(C, a, cantor_add(C, b, c)));
      CHECK(cantor_add(C, a, identity(C)) == a);
      CHECK(cantor_add(C, a, negate(C, a)).is_identity());
      CHECK(is_valid(C, negate(C, c)));
      CHECK(is_valid(C, cantor_add(C, c, c)));
    }
  }
}

TEST_CASE("decompose and recompose") {
  for (const auto& C : test_curves()) {
    Rng rng(9);
    int done = 0;
    for (int i = 0; i < 500; ++i) {
      Divisor D = random_divisor(C, rng);
      auto fac = decompose(C, D, C.genus(), rng);
      REQUIRE(fac);
      unsigned deg = 0;
      for (const auto& [p, e] : fac->parts) {
        CHECK(poly::is_irreducible(p.u));
        CHECK(is_valid(C, as_divisor(p)));
        deg += e * p.degree();
      }
      CHECK(deg == static_cast<unsigned>(D.u.degree()));
      CHECK(recompose(C, *fac) == D);
      ++done;
    }
    CHECK(done == 500);
  }
}

TEST_CASE("random divisor distribution") {
  auto C = f7_curve();
  Rng a(42), b(42);
  for (int i = 0; i < 20; ++i) CHECK(random_divisor(C, a) == random_divisor(C, b));
  auto all = enumerate_divisors(C);
  double full = 0;
  for (const auto& D : all) full += D.u.degree() == 2;
  const double p = full / static_cast<double>(all.size());
  const int n = 20000;
  Rng rng(1);
  int hits = 0;
  std::set<std::string> seen;
  Jacobian J(C);
  for (int i = 0; i < n; ++i) {
    Divisor D = random_divisor(C, rng);
    hits += D.u.degree() == 2;
    seen.insert(J.canonical_bytes(D));
  }
  const double sigma = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(hits / static_cast<double>(n) - p) < 5 * sigma);
  CHECK(seen.size() == all.size());
}

TEST_CASE("generic solvers on the Jacobian") {
  auto C = f7_curve();
  u64 N = jacobian_order(C);
  Jacobian J(C);
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    Divisor D = random_divisor(C, rng);
    u64 x = rng.below(N);
    Divisor Q = scalar_mul(C, D, static_cast<long long>(x));
    generic::DlogInstance<Jacobian> inst{J, D, Q, N};
    // D may have smaller order than N; compare images rather than logs.
    u64 got = generic::exhaustive(inst);
    CHECK(scalar_mul(C, D, static_cast<long long>(got)) == Q);
  }
}
