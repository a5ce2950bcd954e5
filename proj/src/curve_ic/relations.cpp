#include <atomic>
#include <chrono>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "dlkit/curve_ic/curve_ic.hpp"
#include "dlkit/error.hpp"
#include "dlkit/generic/group.hpp"
#include "key.hpp"
#include "modular.hpp"

namespace dlkit::curve_ic {

namespace {

Divisor prime_multiple(const HyperellipticCurve& C, const PrimeDivisor& P, i64 e) {
  return curve::scalar_mul(C, curve::as_divisor(P), e);
}

Divisor relation_support(const HyperellipticCurve& C, const CurveFactorBase& fb, const PartialRelation& rel) {
  Divisor sum = curve::identity(C);
  for (const auto& [col, e] : rel.fb) {
    sum = curve::cantor_add(C, sum, prime_multiple(C, fb.primes[fb.columns.at(col).prime], e));
  }
  for (const auto& [lp, c] : rel.lp) {
    sum = curve::cantor_add(C, sum, prime_multiple(C, fb.primes[fb.large_pairs.at(lp).prime], c));
  }
  return sum;
}

}  // namespace

bool verify_relation(const HyperellipticCurve& C, const Divisor& P, const Divisor& Q, const CurveFactorBase& fb,
                     const PartialRelation& rel) {
  curve::Jacobian J(C);
  auto lhs = curve::cantor_add(C, generic::scalar_mul(J, P, rel.a), generic::scalar_mul(J, Q, rel.b));
  return lhs == relation_support(C, fb, rel);
}

bool verify_principal(const HyperellipticCurve& C, const CurveFactorBase& fb, const PartialRelation& rel) {
  return relation_support(C, fb, rel).is_identity();
}

PartialRelation combine(const std::vector<const PartialRelation*>& rels, const std::vector<i64>& coeffs, u64 ell) {
  std::map<u32, i64> fbs;
  std::map<u32, i64> lps;
  PartialRelation out;
  for (std::size_t i = 0; i < rels.size(); ++i) {
    const i64 c = coeffs[i];
    if (c == 0) continue;
    out.a = add_mod64(out.a, scale_mod64(rels[i]->a, c, ell), ell);
    out.b = add_mod64(out.b, scale_mod64(rels[i]->b, c, ell), ell);
    for (const auto& [col, e] : rels[i]->fb) fbs[col] += c * e;
    for (const auto& [lp, e] : rels[i]->lp) lps[lp] += c * e;
  }
  for (const auto& [col, e] : fbs) {
    if (e != 0) out.fb.emplace_back(col, e);
  }
  for (const auto& [lp, e] : lps) {
    if (e != 0) out.lp.emplace_back(lp, static_cast<int>(e));
  }
  return out;
}

namespace {

// Classification of a smooth divisor; nullopt when rejected.
std::optional<PartialRelation> classify(const CurveFactorBase& fb, const curve::DivisorFactorization& F,
                                        unsigned max_lp) {
  std::map<u32, i64> fbs;
  std::map<u32, i64> lps;
  for (const auto& [P, mult] : F.parts) {
    auto idx = fb.find(P);
    if (!idx) return std::nullopt;
    const auto& slot = fb.slots[*idx];
    if (slot.large) {
      if (fb.large_pairs[slot.index].ramified) return std::nullopt;
      lps[slot.index] += slot.sign * static_cast<i64>(mult);
    } else {
      fbs[slot.index] += slot.sign * static_cast<i64>(mult);
    }
  }
  if (lps.size() > max_lp) return std::nullopt;
  PartialRelation rel;
  for (const auto& [col, e] : fbs) {
    if (e != 0) rel.fb.emplace_back(col, e);
  }
  for (const auto& [lp, e] : lps) {
    if (e != 1 && e != -1) return std::nullopt;
    rel.lp.emplace_back(lp, static_cast<int>(e));
  }
  return rel;
}

std::size_t partition(const Divisor& R) {
  u64 h = static_cast<u64>(R.u.degree()) * 0x9e3779b97f4a7c15ULL;
  for (u64 c : R.u.coeffs()) h = (h ^ c) * 0xbf58476d1ce4e5b9ULL;
  if (!R.v.is_zero()) h = (h ^ R.v.coeff(0)) * 0x94d049bb133111ebULL;
  return static_cast<std::size_t>((h >> 32) % 20);
}

u64 draw_scalar(ff::Rng& rng, u64 ell) { return ell ? rng.below(ell) : rng.below(u64{1} << 31); }

}  // namespace

std::vector<PartialRelation> walk_relations(const HyperellipticCurve& C, const Divisor& P, const Divisor& Q,
                                            const CurveFactorBase& fb, const WalkParams& params,
                                            WalkStats* stats) {
  if (params.count == 0 && params.max_steps == 0) {
    throw Error(ErrorCode::DomainError, "walk needs a relation count or a step limit");
  }
  const u64 ell = params.ell;
  curve::Jacobian J(C);
  const auto start = std::chrono::steady_clock::now();
  std::vector<PartialRelation> out;
  WalkStats total;
  std::mutex mu;
  std::atomic<u64> steps_taken{0};
  std::atomic<bool> stop{false};
  std::atomic<bool> over_budget{false};

  auto worker = [&](unsigned w) {
    ff::Rng rng = ff::Rng(params.seed).fork(w);
    WalkStats local;
    struct Step {
      Divisor T;
      u64 a, b;
    };
    std::vector<Step> table;
    Divisor R;
    u64 a = 0, b = 0;
    std::unordered_set<std::string> smooth_seen;
    auto restart = [&] {
      table.clear();
      smooth_seen.clear();
      for (int j = 0; j < 20; ++j) {
        u64 sa = draw_scalar(rng, ell), sb = draw_scalar(rng, ell);
        table.push_back({curve::cantor_add(C, generic::scalar_mul(J, P, sa), generic::scalar_mul(J, Q, sb)), sa, sb});
      }
      a = draw_scalar(rng, ell);
      b = draw_scalar(rng, ell);
      R = curve::cantor_add(C, generic::scalar_mul(J, P, a), generic::scalar_mul(J, Q, b));
    };
    restart();
    u64 since_restart = 0;
    while (!stop.load(std::memory_order_relaxed)) {
      if (params.max_steps && steps_taken.fetch_add(1, std::memory_order_relaxed) >= params.max_steps) break;
      const auto& s = table[partition(R)];
      R = curve::cantor_add(C, R, s.T);
      a = add_mod64(a, s.a, ell);
      b = add_mod64(b, s.b, ell);
      ++local.steps;
      if (++since_restart >= params.restart) {
        since_restart = 0;
        ++local.restarts;
        restart();
      }
      if ((local.steps & 4095) == 0 && params.budget_secs > 0) {
        std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
        if (el.count() > params.budget_secs) {
          over_budget = true;
          stop = true;
          break;
        }
      }
      if (!poly::is_smooth(R.u, fb.B)) continue;
      if (!smooth_seen.insert(prime_key(R.u, R.v)).second) {
        // back on an earlier point: the walk is cycling
        ++local.cycles;
        since_restart = 0;
        restart();
        continue;
      }
      auto F = curve::decompose(C, R, fb.B, rng);
      std::optional<PartialRelation> rel;
      if (F) rel = classify(fb, *F, params.max_lp);
      if (!rel) {
        ++local.rejected;
        continue;
      }
      rel->a = a;
      rel->b = b;
      if (params.verify && ell && !verify_relation(C, P, Q, fb, *rel)) {
        throw Error(ErrorCode::VerificationFailed, "walk relation does not re-verify");
      }
      switch (rel->lp.size()) {
        case 0: ++local.full; break;
        case 1: ++local.single; break;
        default: ++local.twice; break;
      }
      std::lock_guard lock(mu);
      out.push_back(std::move(*rel));
      if (params.count && out.size() >= params.count) stop = true;
    }
    std::lock_guard lock(mu);
    total.steps += local.steps;
    total.full += local.full;
    total.single += local.single;
    total.twice += local.twice;
    total.rejected += local.rejected;
    total.restarts += local.restarts;
    total.cycles += local.cycles;
  };

  const unsigned workers = std::max(1u, params.workers);
  if (workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          worker(w);
        } catch (...) {
          errors[w] = std::current_exception();
          stop = true;
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  if (stats) *stats = total;
  if (over_budget) throw Error(ErrorCode::TimeBudgetExceeded, "relation walk exceeded its time budget");
  return out;
}

std::vector<PartialRelation> adh_relations(const HyperellipticCurve& C, const CurveFactorBase& fb,
                                           const AdhParams& params, AdhStats* stats) {
  if (params.count == 0 && params.max_trials == 0) {
    throw Error(ErrorCode::DomainError, "ADH collection needs a count or a trial limit");
  }
  const auto& F = C.field();
  const int dv = params.v_degree < 0 ? static_cast<int>(C.genus()) : params.v_degree;
  ff::Rng rng(params.seed);
  AdhStats st;
  std::vector<PartialRelation> out;
  while ((params.count == 0 || out.size() < params.count) && (params.max_trials == 0 || st.trials < params.max_trials)) {
    ++st.trials;
    std::vector<u64> coeffs(dv + 1);
    for (auto& c : coeffs) c = F.random(rng);
    if (coeffs.back() == 0) coeffs.back() = 1;
    poly::Polynomial v(F, coeffs);
    auto norm = v * v + C.h() * v - C.f();
    if (!poly::is_smooth(norm, fb.B)) continue;
    ++st.smooth;
    auto fact = poly::factor(norm, rng);
    std::map<u32, i64> fbs;
    bool ok = true;
    for (const auto& [P, e] : fact.factors) {
      auto idx = fb.find({P, v % P});
      if (!idx || fb.slots[*idx].large) {
        ok = false;
        break;
      }
      fbs[fb.slots[*idx].index] += fb.slots[*idx].sign * static_cast<i64>(e);
    }
    if (!ok) continue;
    PartialRelation rel;
    for (const auto& [col, e] : fbs) {
      if (e != 0) rel.fb.emplace_back(col, e);
    }
    out.push_back(std::move(rel));
  }
  if (stats) *stats = st;
  return out;
}

void write_relations(std::ostream& os, const std::vector<PartialRelation>& rels) {
  for (const auto& r : rels) {
    os << r.a << ' ' << r.b << " |";
    for (const auto& [c, e] : r.fb) os << ' ' << c << ':' << e;
    os << " |";
    for (const auto& [l, e] : r.lp) os << ' ' << l << ':' << e;
    os << '\n';
  }
}

std::vector<PartialRelation> read_relations(std::istream& is) {
  std::vector<PartialRelation> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    PartialRelation r;
    std::string bar;
    if (!(ls >> r.a >> r.b >> bar) || bar != "|") throw Error(ErrorCode::ParseError, "bad relation line: " + line);
    std::string tok;
    int section = 0;
    while (ls >> tok) {
      if (tok == "|") {
        ++section;
        continue;
      }
      auto colon = tok.find(':');
      if (colon == std::string::npos || section > 1) throw Error(ErrorCode::ParseError, "bad relation entry: " + tok);
      const u32 idx = static_cast<u32>(std::stoul(tok.substr(0, colon)));
      const i64 e = std::stoll(tok.substr(colon + 1));
      if (section == 0) {
        r.fb.emplace_back(idx, e);
      } else {
        r.lp.emplace_back(idx, static_cast<int>(e));
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace dlkit::curve_ic
