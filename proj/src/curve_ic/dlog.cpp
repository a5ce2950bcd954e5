#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "dlkit/curve_ic/curve_ic.hpp"
#include "dlkit/error.hpp"
#include "dlkit/ff/numtheory.hpp"
#include "dlkit/generic/solvers.hpp"
#include "dlkit/linalg/integer.hpp"
#include "dlkit/linalg/sparse.hpp"
#include "modular.hpp"

namespace dlkit::curve_ic {

namespace {

constexpr std::size_t kDenseLimit = 400;

u64 dot(const std::vector<u64>& lambda, const std::vector<u64>& v, u64 ell) {
  u64 s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s = add_mod64(s, mul_mod64(lambda[i], v[i], ell), ell);
  return s;
}

}  // namespace

std::optional<u64> log_from_relations(const std::vector<PartialRelation>& rels, const CurveFactorBase& fb, u64 ell,
                                      u64 seed) {
  // Rows touching a column nobody else touches cannot be in a kernel vector;
  // prune them repeatedly.
  std::vector<bool> alive(rels.size(), true);
  std::vector<std::size_t> weight(fb.columns.size(), 0);
  auto active = [&](u32 col, i64 e) { return !fb.columns[col].ramified && linalg::to_mod(e, ell) != 0; };
  for (const auto& r : rels) {
    for (const auto& [c, e] : r.fb) weight[c] += active(c, e);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < rels.size(); ++i) {
      if (!alive[i]) continue;
      bool single = std::any_of(rels[i].fb.begin(), rels[i].fb.end(),
                                [&](const auto& ce) { return active(ce.first, ce.second) && weight[ce.first] == 1; });
      if (!single) continue;
      alive[i] = false;
      changed = true;
      for (const auto& [c, e] : rels[i].fb) weight[c] -= active(c, e);
    }
  }
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < rels.size(); ++i) {
    if (alive[i]) rows.push_back(i);
  }
  std::map<u32, u32> colmap;
  for (u32 c = 0; c < weight.size(); ++c) {
    if (weight[c] > 0) colmap.emplace(c, static_cast<u32>(colmap.size()));
  }
  const std::size_t m = rows.size(), n = colmap.size();
  if (m == 0 || m <= n) return std::nullopt;

  std::vector<u64> av(m), bv(m);
  for (std::size_t i = 0; i < m; ++i) {
    av[i] = rels[rows[i]].a % ell;
    bv[i] = rels[rows[i]].b % ell;
  }
  ff::Rng rng(seed);
  auto finish = [&](const std::vector<u64>& lambda) -> std::optional<u64> {
    const u64 lb = dot(lambda, bv, ell);
    if (lb == 0) return std::nullopt;
    const u64 la = dot(lambda, av, ell);
    return mul_mod64((ell - la) % ell, linalg::inv_mod(lb, ell), ell);
  };

  if (n <= kDenseLimit) {
    std::vector<linalg::Vec> At(n, linalg::Vec(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& [c, e] : rels[rows[i]].fb) {
        if (fb.columns[c].ramified) continue;
        auto it = colmap.find(c);
        if (it == colmap.end()) continue;
        At[it->second][i] = add_mod64(At[it->second][i], linalg::to_mod(e, ell), ell);
      }
    }
    auto sol = linalg::dense_solve(std::move(At), linalg::Vec(n, 0), ell);
    if (!sol || sol->kernel.empty()) return std::nullopt;
    for (int attempt = 0; attempt < 4; ++attempt) {
      std::vector<u64> lambda(m, 0);
      for (const auto& k : sol->kernel) {
        const u64 c = rng.below(ell);
        for (std::size_t i = 0; i < m; ++i) lambda[i] = add_mod64(lambda[i], mul_mod64(c, k[i], ell), ell);
      }
      if (auto x = finish(lambda)) return x;
    }
    return std::nullopt;
  }

  linalg::SparseMatrix M(m, m, ell);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [c, e] : rels[rows[i]].fb) {
      if (fb.columns[c].ramified) continue;
      auto it = colmap.find(c);
      if (it != colmap.end()) M.add(it->second, i, e);
    }
  }
  for (int attempt = 0; attempt < 4; ++attempt) {
    linalg::WiedemannParams wp;
    wp.seed = rng.next();
    auto lambda = linalg::wiedemann_kernel(M, ell, wp);
    if (!lambda) continue;
    if (auto x = finish(*lambda)) return x;
  }
  return std::nullopt;
}

Divisor random_subgroup_element(const HyperellipticCurve& C, u64 N, u64 ell, ff::Rng& rng) {
  if (ell == 0 || N % ell != 0) throw Error(ErrorCode::DomainError, "ell must divide the group order");
  curve::Jacobian J(C);
  for (int i = 0; i < 200; ++i) {
    auto D = generic::scalar_mul(J, curve::random_divisor(C, rng), N / ell);
    if (!D.is_identity()) return D;
  }
  throw Error(ErrorCode::NotInSubgroup, "no element of order ell found");
}

u64 subgroup_dlog(const HyperellipticCurve& C, const Divisor& P, const Divisor& Q, u64 ell,
                  const CurveFactorBase& fb, const DlogOptions& options, DlogReport* report) {
  if (!ff::is_prime(ell)) throw Error(ErrorCode::DomainError, "subgroup order must be prime");
  curve::Jacobian J(C);
  if (!generic::scalar_mul(J, Q, ell).is_identity() || !generic::scalar_mul(J, P, ell).is_identity() ||
      P.is_identity()) {
    throw Error(ErrorCode::NotInSubgroup, "P or Q is not of order ell");
  }
  DlogReport rep;
  rep.ell = ell;
  rep.r = fb.r;
  rep.columns = fb.columns.size();
  if (Q.is_identity()) {
    if (report) *report = rep;
    return 0;
  }
  const auto start = std::chrono::steady_clock::now();
  const unsigned max_lp = max_large_primes(options.strategy);
  std::vector<PartialRelation> fulls, partials;
  std::set<std::pair<std::vector<std::pair<u32, i64>>, std::vector<std::pair<u32, int>>>> seen;
  u64 batch = options.first_batch;
  unsigned failures = 0;
  for (u64 round = 0;; ++round) {
    WalkParams wp;
    wp.ell = ell;
    wp.max_lp = max_lp;
    wp.max_steps = batch;
    wp.seed = options.seed * 0x100000001b3ULL + round;
    wp.workers = options.workers;
    if (options.budget_secs > 0) {
      std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
      wp.budget_secs = options.budget_secs - el.count();
      if (wp.budget_secs <= 0) throw Error(ErrorCode::TimeBudgetExceeded, "index calculus exceeded its time budget");
    }
    WalkStats ws;
    const std::size_t before = seen.size();
    for (auto& r : walk_relations(C, P, Q, fb, wp, &ws)) {
      // a repeated support means the walk hit the same point twice; keep
      // the first so the answer comes from the linear algebra alone
      if (!seen.insert({r.fb, r.lp}).second) {
        ++rep.repeats;
        continue;
      }
      (r.full() ? fulls : partials).push_back(std::move(r));
    }
    rep.walk.steps += ws.steps;
    rep.walk.full += ws.full;
    rep.walk.single += ws.single;
    rep.walk.twice += ws.twice;
    rep.walk.rejected += ws.rejected;
    rep.walk.restarts += ws.restarts;
    rep.walk.cycles += ws.cycles;
    batch = std::min<u64>(batch * 3 / 2, 2'000'000);
    // the subgroup has run out of fresh smooth points
    if (seen.size() == before && ++failures >= options.max_rounds) {
      if (report) *report = rep;
      throw Error(ErrorCode::RankDeficient, "relation walk finds no new relations");
    }

    std::vector<PartialRelation> recombined;
    if (max_lp == 1) recombined = recombine_single_lp(partials, ell);
    if (max_lp == 2) recombined = recombine_double_lp(partials, ell);
    std::vector<PartialRelation> all = fulls;
    all.insert(all.end(), recombined.begin(), recombined.end());
    std::vector<bool> hit(fb.columns.size(), false);
    std::size_t cols = 0;
    for (const auto& r : all) {
      for (const auto& [c, e] : r.fb) {
        if (!fb.columns[c].ramified && !hit[c]) {
          hit[c] = true;
          ++cols;
        }
      }
    }
    if (all.size() < cols + options.extra) continue;
    for (const auto& r : recombined) {
      if (!verify_relation(C, P, Q, fb, r)) {
        throw Error(ErrorCode::VerificationFailed, "recombined relation does not re-verify");
      }
    }
    ++rep.kernel_attempts;
    auto x = log_from_relations(all, fb, ell, options.seed + round);
    rep.fulls = fulls.size();
    rep.partials = partials.size();
    rep.recombined = recombined.size();
    if (x && generic::scalar_mul(J, P, *x) == Q) {
      if (report) *report = rep;
      return *x;
    }
    if (x) throw Error(ErrorCode::NotInSubgroup, "kernel answer fails verification; Q is not in <P>");
    if (++failures >= options.max_rounds) {
      if (report) *report = rep;
      throw Error(ErrorCode::RankDeficient, "no usable kernel vector in the relation matrix");
    }
  }
}

bool index_calculus_applies(const HyperellipticCurve& C, u64 ell, const CurveFactorBase& fb, unsigned extra) {
  double fact = 1;
  for (unsigned i = 2; i <= C.genus(); ++i) fact *= i;
  return static_cast<double>(ell) >= 4 * fact * static_cast<double>(fb.columns.size() + extra);
}

u64 solve_jacobian_dlog(const HyperellipticCurve& C, const Divisor& P, const Divisor& Q, u64 N,
                        const DlogOptions& options, DlogReport* report) {
  if (N == 0) throw Error(ErrorCode::DomainError, "order must be positive");
  curve::Jacobian J(C);
  if (!generic::scalar_mul(J, P, N).is_identity()) throw Error(ErrorCode::NotInSubgroup, "N is not a multiple of ord(P)");
  if (!generic::scalar_mul(J, Q, N).is_identity()) throw Error(ErrorCode::NotInSubgroup, "Q is not in <P>");
  const auto factors = ff::factorize(N);
  if (factors.empty()) return 0;
  const u64 ell = factors.back().first;
  const double r = options.r >= 0 ? options.r : default_exponent(options.strategy, C.genus());
  std::optional<CurveFactorBase> fb;
  if (ell > 1000) {
    fb = build_factor_base(C, options.B, r);
    if (!index_calculus_applies(C, ell, *fb, options.extra)) fb.reset();
  }
  unsigned ic_digits = 0;
  u64 x = 0, modulus = 1;
  for (const auto& [p, e] : factors) {
    u64 pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    const auto Pi = generic::scalar_mul(J, P, N / pe);
    const auto Qi = generic::scalar_mul(J, Q, N / pe);
    const auto gamma = generic::scalar_mul(J, Pi, pe / p);
    u64 xi = 0, pk = 1;
    for (unsigned k = 0; k < e; ++k) {
      auto H = curve::cantor_add(C, Qi, curve::negate(C, generic::scalar_mul(J, Pi, xi)));
      H = generic::scalar_mul(J, H, pe / (pk * p));
      u64 d = 0;
      if (gamma.is_identity()) {
        if (!H.is_identity()) throw Error(ErrorCode::NotInSubgroup, "Q is not in <P>");
      } else if (p == ell && fb) {
        d = subgroup_dlog(C, gamma, H, ell, *fb, options, report);
        ++ic_digits;
      } else {
        d = generic::bsgs(generic::DlogInstance<curve::Jacobian>{J, gamma, H, p});
      }
      xi += d * pk;
      pk *= p;
    }
    // CRT with the running result
    const u64 inv = *ff::invmod(modulus % pe, pe);
    const u64 t = ff::mulmod((xi + pe - x % pe) % pe, inv, pe);
    x += modulus * t;
    modulus *= pe;
  }
  x %= N;
  if (generic::scalar_mul(J, P, x) != Q) throw Error(ErrorCode::NotInSubgroup, "Q is not in <P>");
  if (report) report->ic_digits = ic_digits;
  return x;
}

GroupStructure group_structure(const std::vector<PartialRelation>& relations, const CurveFactorBase& fb) {
  const std::size_t n = fb.columns.size();
  linalg::IntMatrix M;
  for (const auto& r : relations) {
    if (!r.lp.empty()) throw Error(ErrorCode::DomainError, "group structure needs relations inside the base");
    std::vector<BigInt> row(n, 0);
    for (const auto& [c, e] : r.fb) row[c] += e;
    M.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (!fb.columns[c].ramified) continue;
    std::vector<BigInt> row(n, 0);
    row[c] = 2;
    M.push_back(std::move(row));
  }
  GroupStructure gs;
  if (M.empty()) throw Error(ErrorCode::RankDeficient, "no relations");
  auto hnf = linalg::hermite_normal_form(M, 100000);
  gs.rank = hnf.rank;
  if (hnf.rank < n) throw Error(ErrorCode::RankDeficient, "relation lattice is not of full rank");
  linalg::IntMatrix basis(hnf.H.begin(), hnf.H.begin() + static_cast<std::ptrdiff_t>(n));
  BigInt D = 1;
  for (std::size_t i = 0; i < n; ++i) D *= basis[i][i];
  auto snf = linalg::smith_normal_form(basis, &D, false, 100000);
  gs.order = 1;
  for (const auto& d : snf.invariants) {
    if (d != 1) gs.invariants.push_back(d);
    gs.order *= d;
  }
  return gs;
}

}  // namespace dlkit::curve_ic
