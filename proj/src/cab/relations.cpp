#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "dlkit/analysis/analysis.hpp"
#include "dlkit/cab/cab.hpp"
#include "dlkit/error.hpp"

namespace dlkit::cab {

RationalPoints degree1_primes(const CabCurve& C, u64 cap) {
  const FieldSpec& k = C.field();
  if (k.order() > cap) throw Error(ErrorCode::CapExceeded, "field too large to enumerate points");
  RationalPoints pts;
  ff::Rng rng(1);
  for (u64 x = 0; x < k.order(); ++x)
    for (u64 y : poly::roots(C.fiber(x), rng)) pts.affine.emplace_back(x, y);
  std::sort(pts.affine.begin(), pts.affine.end());
  return pts;
}

Polynomial norm(const CabCurve& C, const PlaneFunction& w) {
  const FieldSpec& k = C.field();
  const unsigned a = C.a();
  Polynomial r = w.r.is_zero() ? Polynomial(k) : w.r, s = w.s.is_zero() ? Polynomial(k) : w.s;
  if (r.is_zero() && s.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "w = 0");
  // (-1)^a sum_j C_j (-r)^j s^(a-j)
  std::vector<Polynomial> neg_r_pow{Polynomial::constant(k, 1)}, s_pow{Polynomial::constant(k, 1)};
  for (unsigned j = 1; j <= a; ++j) {
    neg_r_pow.push_back(neg_r_pow.back() * -r);
    s_pow.push_back(s_pow.back() * s);
  }
  Polynomial N(k);
  for (unsigned j = 0; j <= a; ++j) N += C.coefficient(j) * neg_r_pow[j] * s_pow[a - j];
  return a % 2 ? -N : N;
}

int pole_order(const CabCurve& C, const PlaneFunction& w) {
  const int a = static_cast<int>(C.a()), b = static_cast<int>(C.b());
  int p = w.r.is_zero() ? -1 : a * w.r.degree();
  if (!w.s.is_zero()) p = std::max(p, b + a * w.s.degree());
  return p;
}

int CabRelation::degree() const {
  int d = 0;
  for (const auto& [p, e] : finite) d += e * static_cast<int>(p.degree());
  return d;
}

namespace {

void set_status(DivisorStatus* st, DivisorStatus v) {
  if (st) *st = v;
}

std::optional<CabRelation> vertical_divisor(const CabCurve& C, const Polynomial& r, unsigned bound, ff::Rng& rng,
                                            DivisorStatus* status) {
  const FieldSpec& k = C.field();
  CabRelation rel;
  if (r.degree() <= 0) {
    set_status(status, DivisorStatus::smooth);
    return rel;
  }
  auto fac = poly::factor(r, rng);
  if (fac.max_degree() > static_cast<int>(bound)) {
    set_status(status, DivisorStatus::not_smooth);
    return std::nullopt;
  }
  std::map<CabPrime, int> acc;
  for (const auto& f : fac.factors) {
    if (f.poly.degree() != 1) {
      set_status(status, DivisorStatus::non_generic);
      return std::nullopt;
    }
    const u64 x = k.neg(f.poly.coeff(0));
    auto fib = poly::factor(C.fiber(x), rng);
    unsigned total = 0;
    for (const auto& g : fib.factors) {
      if (g.poly.degree() != 1) {
        set_status(status, DivisorStatus::non_generic);
        return std::nullopt;
      }
      // At a smooth point X - x has valuation equal to the root multiplicity.
      CabPrime p{f.poly, Polynomial::constant(k, k.neg(g.poly.coeff(0)))};
      if (p.v.is_zero()) p.v = Polynomial(k);
      acc[p] += static_cast<int>(f.exponent * g.exponent);
      total += g.exponent;
    }
    if (total != C.a()) throw Error(ErrorCode::VerificationFailed, "fibre degree mismatch");
  }
  rel.finite.assign(acc.begin(), acc.end());
  rel.infinity = static_cast<int>(C.a()) * r.degree();
  set_status(status, DivisorStatus::smooth);
  return rel;
}

}  // namespace

std::optional<CabRelation> principal_divisor(const CabCurve& C, const PlaneFunction& w, unsigned bound,
                                             ff::Rng& rng, DivisorStatus* status) {
  const FieldSpec& k = C.field();
  if (w.s.is_zero()) {
    if (w.r.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "w = 0");
    return vertical_divisor(C, w.r.monic(), bound, rng, status);
  }
  const Polynomial r = w.r.is_zero() ? Polynomial(k) : w.r;
  if (gcd(r, w.s).degree() > 0) {
    set_status(status, DivisorStatus::ramified);
    return std::nullopt;
  }
  Polynomial N = norm(C, w);
  if (N.degree() != pole_order(C, w)) throw Error(ErrorCode::VerificationFailed, "norm degree differs from pole order");
  auto fac = poly::smooth_part(N, bound, rng);
  if (!fac) {
    set_status(status, DivisorStatus::not_smooth);
    return std::nullopt;
  }
  // The only zero of w over a root of P is Y = -r/s there; its residue degree
  // over P is 1, so its valuation is the multiplicity of P in the norm.
  CabRelation rel;
  for (const auto& f : fac->factors) {
    Polynomial v = (-(r * invmod(w.s % f.poly, f.poly))) % f.poly;
    if (v.is_zero()) v = Polynomial(k);
    rel.finite.push_back({CabPrime{f.poly, v}, static_cast<int>(f.exponent)});
  }
  std::sort(rel.finite.begin(), rel.finite.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  rel.infinity = pole_order(C, w);
  if (rel.degree() != rel.infinity) throw Error(ErrorCode::VerificationFailed, "relation is not of degree zero");
  set_status(status, DivisorStatus::smooth);
  return rel;
}

curve::Divisor fold_relation(const curve::HyperellipticCurve& H, const CabRelation& rel) {
  curve::Divisor acc = curve::identity(H);
  for (const auto& [p, e] : rel.finite)
    acc = curve::cantor_add(H, acc, curve::scalar_mul(H, curve::make_divisor(H, p.u, p.v), e));
  return acc;
}

std::vector<CabRelation> diem_line_relations(const CabCurve& C, const std::vector<std::pair<u64, u64>>& fb,
                                             std::size_t count, u64 seed, LineStats* stats, u64 max_lines) {
  const FieldSpec& k = C.field();
  if (fb.size() < 2) throw Error(ErrorCode::DomainError, "need at least two factor-base points");
  std::set<std::pair<u64, u64>> in_fb(fb.begin(), fb.end());
  ff::Rng rng(seed);
  LineStats st;
  std::vector<CabRelation> out;
  while (out.size() < count && st.lines < max_lines) {
    const auto& p1 = fb[rng.below(fb.size())];
    const auto& p2 = fb[rng.below(fb.size())];
    if (p1.first == p2.first) continue;
    ++st.lines;
    const u64 slope = k.div(k.sub(p2.second, p1.second), k.sub(p2.first, p1.first));
    // w = Y - y1 - slope (X - x1)
    Polynomial r(k, {k.neg(k.sub(p1.second, k.mul(slope, p1.first))), k.neg(slope)});
    PlaneFunction w{r, Polynomial::constant(k, 1)};
    Polynomial through = Polynomial(k, {k.neg(p1.first), 1}) * Polynomial(k, {k.neg(p2.first), 1});
    auto [residual, rem] = divrem(norm(C, w), through);
    if (!rem.is_zero()) throw Error(ErrorCode::VerificationFailed, "line misses its defining points");
    if (!poly::is_smooth(residual, 1)) continue;
    ++st.split;
    auto rel = principal_divisor(C, w, 1, rng);
    if (!rel) continue;
    bool ok = true;
    for (const auto& [p, e] : rel->finite)
      ok = ok && in_fb.count({k.neg(p.u.coeff(0)), p.v.coeff(0)});
    if (!ok) continue;
    ++st.relations;
    out.push_back(std::move(*rel));
  }
  if (stats) *stats = st;
  return out;
}

L13Plan plan_l13(unsigned a, unsigned b, u64 q, double a0, double b0, double delta) {
  if (a0 <= 0 || b0 <= 0) throw Error(ErrorCode::DomainError, "a0 and b0 must be positive");
  L13Plan p;
  p.a0 = a0;
  p.b0 = b0;
  const double g = (a - 1.0) * (b - 1.0) / 2.0;
  const double lq = std::log(static_cast<double>(q));
  if (g < 1) throw Error(ErrorCode::DomainError, "genus must be positive");
  p.M = std::log(g * lq) / lq;
  p.a_bound = a0 * std::cbrt(g) / std::cbrt(p.M);
  p.b_bound = b0 * std::cbrt(g * g) * std::cbrt(p.M);
  p.c = static_cast<double>(analysis::l13_c(a0, b0));
  p.d = p.c;
  p.e = (a0 * p.c + b0) / 3.0;
  p.rs_degree = p.c * std::cbrt(g) * std::cbrt(p.M * p.M);
  p.constant = 4.0 / 3.0 * std::sqrt(a0 * p.c + b0);
  p.bounds_ok = a < p.a_bound && b < p.b_bound;
  p.asymptotic_regime = g >= std::pow(lq, delta);
  return p;
}

L13Plan plan_l13(const CabCurve& C, double a0, double b0, double delta) {
  return plan_l13(C.a(), C.b(), C.field().order(), a0, b0, delta);
}

L13Plan plan_l13_strict(const CabCurve& C, double a0, double b0) {
  L13Plan p = plan_l13(C, a0, b0);
  if (!p.bounds_ok) throw Error(ErrorCode::BoundsViolated, "a or b exceed the L(1/3) bounds");
  return p;
}

unsigned descent_target(unsigned deg, unsigned bound, double shrink) {
  const unsigned shrunk = static_cast<unsigned>(std::ceil(deg * shrink - 1e-12));
  return std::max(bound, std::min(deg > 0 ? deg - 1 : 0, shrunk));
}

CabRelation special_q_step(const CabCurve& C, const CabPrime& Q, unsigned target, const DescentParams& params,
                           ff::Rng& rng, u64* trials) {
  const FieldSpec& k = C.field();
  const unsigned D = Q.degree();
  // Keep a deg r below b so the norm degree stays at b when s is constant.
  const int dt = std::max(1, static_cast<int>(C.b() / C.a()) - static_cast<int>(D));
  const unsigned bound = std::max(target, D);
  for (u64 t = 1; t <= params.max_trials; ++t) {
    if (trials) *trials = t;
    Polynomial s = Polynomial::constant(k, 1);
    std::vector<u64> tc(static_cast<std::size_t>(dt) + 1);
    for (auto& c : tc) c = k.random(rng);
    // r + s v = 0 mod u
    Polynomial r = (-(s * Q.v)) % Q.u + Polynomial(k, tc) * Q.u;
    DivisorStatus st;
    auto rel = principal_divisor(C, {r, s}, bound, rng, &st);
    if (!rel) continue;
    bool ok = true, found = false;
    for (const auto& [p, e] : rel->finite) {
      if (p == Q) {
        found = e == 1;
        ok = ok && found;
      } else if (p.degree() > target) {
        ok = false;
      }
    }
    if (ok && found) return *rel;
  }
  throw Error(ErrorCode::DescentStuck, "no smooth function through the prime of degree " + std::to_string(D));
}

DescentResult special_q_descent(const CabCurve& C, const CabPrime& Q, unsigned bound, const DescentParams& params) {
  DescentResult res;
  if (Q.degree() <= bound) {
    res.combination.push_back({Q, 1});
    return res;
  }
  ff::Rng rng(params.seed);
  std::map<CabPrime, long long> comb;
  // Each work item: node index, multiplier of its prime in the final sum.
  res.tree.push_back({Q, 0, {}, {}, 0});
  std::vector<std::pair<std::size_t, long long>> work{{0, 1}};
  while (!work.empty()) {
    auto [idx, mult] = work.back();
    work.pop_back();
    const CabPrime prime = res.tree[idx].prime;
    const unsigned depth = res.tree[idx].depth;
    u64 trials = 0;
    CabRelation rel = special_q_step(C, prime, descent_target(prime.degree(), bound, params.shrink), params, rng, &trials);
    res.tree[idx].relation = rel;
    res.tree[idx].trials = trials;
    res.depth = std::max(res.depth, depth + 1);
    // prime = -sum of the other places of the relation
    for (const auto& [p, e] : rel.finite) {
      if (p == prime) continue;
      const long long m = -mult * e;
      if (p.degree() <= bound) {
        comb[p] += m;
      } else {
        res.tree.push_back({p, depth + 1, {}, {}, 0});
        res.tree[idx].children.push_back(res.tree.size() - 1);
        work.push_back({res.tree.size() - 1, m});
      }
    }
  }
  for (const auto& [p, m] : comb)
    if (m) res.combination.push_back({p, m});
  return res;
}

}  // namespace dlkit::cab
