#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "dlkit/cab/cab.hpp"
#include "dlkit/curve/zeta.hpp"
#include "dlkit/error.hpp"

using namespace dlkit;
using namespace dlkit::cab;
using dlkit::ff::Rng;

namespace {

const FieldSpec F7 = FieldSpec::prime(7);

curve::HyperellipticCurve f7_curve() {
  return curve::HyperellipticCurve(2, Polynomial(F7, {0, 1, 0, 0, 0, 1}), Polynomial(F7));
}

// Y^3 = X^4 + 2 X Y + X + 1 over F_101.
CabCurve c34() { return CabCurve(FieldSpec::prime(101), 3, 4, {{1, 1, 2}, {1, 0, 1}, {0, 0, 1}}); }

curve::HyperellipticCurve genus5_f31() {
  FieldSpec k = FieldSpec::prime(31);
  return curve::HyperellipticCurve(5, Polynomial(k, {3, 1, 0, 7, 0, 0, 2, 0, 0, 0, 0, 1}), Polynomial(k, {0, 1}));
}

}  // namespace

TEST_CASE("curve validation") {
  CHECK_NOTHROW(c34());
  CHECK_THROWS_AS(CabCurve(FieldSpec::prime(101), 3, 4, {}), Error);       // cusp at the origin
  CHECK_THROWS_AS(CabCurve(FieldSpec::prime(101), 2, 4, {{0, 0, 1}}), Error);  // not coprime
  CHECK_THROWS_AS(CabCurve(FieldSpec::prime(3), 3, 4, {{0, 0, 1}}), Error);    // char divides a
  CHECK_THROWS_AS(CabCurve(FieldSpec::prime(101), 3, 4, {{3, 1, 1}}), Error);  // weight 13 >= 12
  CHECK(c34().genus() == 3);
  auto back = CabCurve::parse(c34().to_text());
  CHECK(back.to_text() == c34().to_text());
  CHECK_THROWS_AS(CabCurve::parse("field=prime:101\na=3\nb=4\ncab=(1,1)\n"), Error);
}

TEST_CASE("resultant in Y") {
  FieldSpec k = FieldSpec::prime(101);
  Polynomial c0(k, {5, 3});
  // Res_Y(Y^2 + c0, 2Y) = 4 c0
  auto r = resultant_y({c0, Polynomial(k), Polynomial::constant(k, 1)}, {Polynomial(k), Polynomial::constant(k, 2)});
  CHECK(r == c0.scaled(4));
  // Norm of s Y + r equals the resultant with the linear polynomial.
  auto C = c34();
  PlaneFunction w{Polynomial(k, {3, 1, 4}), Polynomial(k, {1, 5})};
  std::vector<Polynomial> Cy;
  for (unsigned j = 0; j <= 3; ++j) Cy.push_back(C.coefficient(j));
  CHECK(resultant_y(Cy, {w.r, w.s}) == norm(C, w));
}

TEST_CASE("degree-one primes") {
  auto C = c34();
  auto pts = degree1_primes(C);
  const double q = 101;
  CHECK(std::abs(static_cast<double>(pts.count()) - (q + 1)) <= 2 * C.genus() * std::sqrt(q));
  for (const auto& [x, y] : pts.affine) CHECK(C.eval(x, y) == 0);
  std::set<std::pair<u64, u64>> uniq(pts.affine.begin(), pts.affine.end());
  CHECK(uniq.size() == pts.affine.size());
  // a = 2 cross-oracle against the curve module's count.
  for (const auto& H : {f7_curve(), genus5_f31()}) {
    auto Cab = CabCurve::from_hyperelliptic(H);
    CHECK(degree1_primes(Cab).count() == curve::count_points(H, 1));
    auto H2 = Cab.to_hyperelliptic();
    CHECK(H2.f() == H.f());
    CHECK(H2.h() == H.h());
  }
}

TEST_CASE("principal divisors: worked examples") {
  auto H = f7_curve();
  auto C = CabCurve::from_hyperelliptic(H);
  Rng rng(1);
  // div(Y): norm is -f = -x(x^2+3x+1)(x^2+4x+1)
  PlaneFunction y{Polynomial(F7), Polynomial::constant(F7, 1)};
  CHECK(norm(C, y) == -H.f());
  DivisorStatus st;
  CHECK_FALSE(principal_divisor(C, y, 1, rng, &st));
  CHECK(st == DivisorStatus::not_smooth);
  auto rel = principal_divisor(C, y, 2, rng, &st);
  REQUIRE(rel);
  CHECK(rel->infinity == 5);
  CHECK(rel->finite.size() == 3);
  for (const auto& [p, e] : rel->finite) CHECK(p.v.is_zero());
  CHECK(fold_relation(H, *rel).is_identity());
  // Vertical line X - x0 over a split fibre: two places, pole of order a = 2.
  for (u64 x0 = 0; x0 < 7; ++x0) {
    auto fib = poly::roots(C.fiber(x0), rng);
    auto vr = principal_divisor(C, {Polynomial(F7, {F7.neg(x0), 1}), Polynomial(F7)}, 1, rng, &st);
    if (fib.size() == 2) {
      REQUIRE(vr);
      CHECK(vr->finite.size() == 2);
      CHECK(vr->infinity == 2);
      CHECK(fold_relation(H, *vr).is_identity());
    } else if (fib.size() == 1) {
      REQUIRE(vr);  // ramified fibre: one place with multiplicity 2
      CHECK(vr->finite.size() == 1);
      CHECK(vr->finite[0].second == 2);
    } else {
      CHECK_FALSE(vr);
      CHECK(st == DivisorStatus::non_generic);
    }
  }
  // Shared root of r and s.
  CHECK_FALSE(principal_divisor(C, {Polynomial(F7, {1, 1}), Polynomial(F7, {1, 1})}, 5, rng, &st));
  CHECK(st == DivisorStatus::ramified);
}

TEST_CASE("random principal divisors fold to the identity") {
  for (const auto& H : {f7_curve(), genus5_f31()}) {
    auto C = CabCurve::from_hyperelliptic(H);
    const FieldSpec& k = C.field();
    Rng rng(17);
    int found = 0;
    for (int t = 0; t < 300; ++t) {
      std::vector<u64> rc(1 + rng.below(5)), sc(1 + rng.below(3));
      for (auto& c : rc) c = k.random(rng);
      for (auto& c : sc) c = k.random(rng);
      PlaneFunction w{Polynomial(k, rc), Polynomial(k, sc)};
      if (w.s.is_zero()) continue;
      auto N = norm(C, w);
      CHECK(N.degree() == pole_order(C, w));
      auto rel = principal_divisor(C, w, H.genus(), rng);
      if (!rel) continue;
      ++found;
      CHECK(rel->degree() == rel->infinity);
      CHECK(fold_relation(H, *rel).is_identity());
    }
    CHECK(found > 20);
  }
}

TEST_CASE("principal divisors on a C_{3,4} curve") {
  auto C = c34();
  const FieldSpec& k = C.field();
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    PlaneFunction w{Polynomial(k, {k.random(rng), k.random(rng), k.random(rng)}), Polynomial(k, {k.random(rng), 1})};
    CHECK(norm(C, w).degree() == pole_order(C, w));
    auto rel = principal_divisor(C, w, 3, rng);
    if (!rel) continue;
    CHECK(rel->degree() == rel->infinity);
    // Each place lies on the curve: C(X, v(X)) = 0 mod u.
    for (const auto& [p, e] : rel->finite) {
      Polynomial acc(k);
      for (unsigned j = 4; j-- > 0;) acc = (acc * p.v + C.coefficient(j)) % p.u;
      CHECK(acc.is_zero());
    }
  }
}

TEST_CASE("Diem line relations on a C_{3,4} curve") {
  auto C = c34();
  auto pts = degree1_primes(C);
  LineStats st;
  auto rels = diem_line_relations(C, pts.affine, 600, 3, &st);
  CHECK(rels.size() == 600);
  for (const auto& r : rels) {
    CHECK(r.finite.size() >= 2);
    CHECK(r.degree() == 4);
    CHECK(r.infinity == 4);
  }
  // Split rate of the residual quadratic against the share of split monic quadratics.
  const double q = 101, p = (q + 1) / (2 * q);
  const double n = static_cast<double>(st.lines);
  const double rate = static_cast<double>(st.split) / n;
  CHECK(std::abs(rate - p) < 5 * std::sqrt(p * (1 - p) / n));
  CHECK(st.relations == st.split);  // the full point set is the factor base
}

TEST_CASE("L(1/3) plan") {
  auto p = plan_l13(c34(), 1.0, 2.0);
  CHECK(p.c == doctest::Approx(1.1908664).epsilon(1e-6));
  CHECK(p.constant == doctest::Approx(2.3817328).epsilon(1e-6));
  CHECK(p.e == doctest::Approx((p.c + 2.0) / 3.0));
  CHECK(p.c * p.c - 4.0 / 9.0 * p.c - 8.0 / 9.0 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_FALSE(p.asymptotic_regime);
  for (double a0 : {0.3, 1.0, 2.5})
    for (double b0 : {0.1, 1.0, 4.0}) {
      auto x = plan_l13(3, 4, 101, a0, b0);
      CHECK(x.c > 0);
      CHECK(plan_l13(3, 4, 101, a0, b0 * 1.5).constant > x.constant);
    }
  // Tiny genus is far outside the bounds.
  CHECK_THROWS_AS(plan_l13_strict(c34(), 0.1, 0.1), Error);
}

TEST_CASE("special-q descent on a genus-5 curve over F_31") {
  auto H = genus5_f31();
  auto C = CabCurve::from_hyperelliptic(H);
  const FieldSpec& k = C.field();
  CHECK(descent_target(3, 2, 0.8) == 2);
  CHECK(descent_target(10, 2, 0.8) == 8);
  CHECK(descent_target(2, 2, 0.8) == 2);
  Rng rng(8);
  int done = 0;
  while (done < 3) {
    Polynomial u(k, {k.random(rng), k.random(rng), k.random(rng), 1});
    if (!poly::is_irreducible(u)) continue;
    auto vs = curve::mumford_v_candidates(H, u, rng);
    if (vs.empty()) continue;
    CabPrime Q{u, vs[0]};
    DescentParams dp;
    dp.seed = 100 + done;
    auto res = special_q_descent(C, Q, 2, dp);
    CHECK(res.depth == 1);
    for (const auto& [p, m] : res.combination) CHECK(p.degree() <= 2);
    // Q equals the combination in the Jacobian.
    curve::Divisor acc = curve::identity(H);
    for (const auto& [p, m] : res.combination)
      acc = curve::cantor_add(H, acc, curve::scalar_mul(H, curve::make_divisor(H, p.u, p.v), m));
    CHECK(acc == curve::make_divisor(H, Q.u, Q.v));
    // Node count against (max primes per relation)^depth.
    std::size_t width = 1;
    for (const auto& node : res.tree) width = std::max(width, node.relation.finite.size());
    CHECK(res.tree.size() <= static_cast<std::size_t>(std::pow(width, res.depth)));
    ++done;
  }
  // Already in the factor base: trivial descent.
  CabPrime small{Polynomial(k, {1, 1}), Polynomial(k)};
  auto triv = special_q_descent(C, small, 2);
  CHECK(triv.tree.empty());
  REQUIRE(triv.combination.size() == 1);
  CHECK(triv.combination[0].second == 1);
}

TEST_CASE("deeper descent") {
  auto H = genus5_f31();
  auto C = CabCurve::from_hyperelliptic(H);
  const FieldSpec& k = C.field();
  Rng rng(21);
  for (;;) {
    Polynomial u(k, {k.random(rng), k.random(rng), k.random(rng), k.random(rng), k.random(rng), 1});
    if (!poly::is_irreducible(u)) continue;
    auto vs = curve::mumford_v_candidates(H, u, rng);
    if (vs.empty()) continue;
    auto res = special_q_descent(C, {u, vs[0]}, 2);
    curve::Divisor acc = curve::identity(H);
    for (const auto& [p, m] : res.combination)
      acc = curve::cantor_add(H, acc, curve::scalar_mul(H, curve::make_divisor(H, p.u, p.v), m));
    CHECK(acc == curve::make_divisor(H, u, vs[0]));
    CHECK(res.depth <= 1 + std::ceil(std::log(5.0) / std::log(1 / 0.8)));
    break;
  }
}
