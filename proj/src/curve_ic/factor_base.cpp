#include <algorithm>
#include <cmath>

#include "dlkit/curve_ic/curve_ic.hpp"
#include "dlkit/error.hpp"
#include "key.hpp"

namespace dlkit::curve_ic {

Strategy parse_strategy(std::string_view name) {
  if (name == "full_b") return Strategy::full_b;
  if (name == "harley") return Strategy::harley;
  if (name == "single_lp") return Strategy::single_lp;
  if (name == "double_lp") return Strategy::double_lp;
  throw Error(ErrorCode::ParseError, "unknown strategy '" + std::string(name) + "'");
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::full_b: return "full_b";
    case Strategy::harley: return "harley";
    case Strategy::single_lp: return "single_lp";
    case Strategy::double_lp: return "double_lp";
  }
  return "?";
}

double default_exponent(Strategy s, unsigned genus) {
  const double g = genus;
  switch (s) {
    case Strategy::full_b: return 1.0;
    case Strategy::harley: return 1.0 - 1.0 / (g + 1.0);
    case Strategy::single_lp: return 1.0 - 2.0 / (2.0 * g + 1.0);
    case Strategy::double_lp: return 1.0 - 1.0 / g;
  }
  return 1.0;
}

unsigned max_large_primes(Strategy s) {
  switch (s) {
    case Strategy::single_lp: return 1;
    case Strategy::double_lp: return 2;
    default: return 0;
  }
}

std::optional<u32> CurveFactorBase::find(const PrimeDivisor& P) const {
  auto it = lookup.find(prime_key(P.u, P.v));
  if (it == lookup.end()) return std::nullopt;
  return it->second;
}

std::size_t CurveFactorBase::ramified_columns() const {
  return static_cast<std::size_t>(std::count_if(columns.begin(), columns.end(),
                                                 [](const PairColumn& c) { return c.ramified; }));
}

CurveFactorBase build_factor_base(const HyperellipticCurve& C, unsigned B, double r, u64 cap) {
  if (B == 0) throw Error(ErrorCode::DomainError, "factor base degree bound must be positive");
  if (!(r > 0.0 && r <= 1.0)) throw Error(ErrorCode::DomainError, "reduction exponent must lie in (0, 1]");
  const u64 q = C.q();
  if (std::pow(static_cast<double>(q), B) > static_cast<double>(cap)) {
    throw Error(ErrorCode::CapExceeded, "q^B above factor base enumeration cap");
  }
  CurveFactorBase fb;
  fb.B = B;
  fb.r = r;
  ff::Rng rng(1);
  for (const auto& u : poly::enumerate_irreducibles(C.field(), B, cap)) {
    for (auto& v : curve::mumford_v_candidates(C, u, rng)) fb.primes.push_back({u, std::move(v)});
  }
  std::sort(fb.primes.begin(), fb.primes.end(), [](const PrimeDivisor& x, const PrimeDivisor& y) {
    return x.u == y.u ? x.v < y.v : x.u < y.u;
  });
  for (u32 i = 0; i < fb.primes.size(); ++i) fb.lookup.emplace(prime_key(fb.primes[i].u, fb.primes[i].v), i);

  std::vector<u32> conj(fb.primes.size());
  for (u32 i = 0; i < fb.primes.size(); ++i) {
    const auto& P = fb.primes[i];
    auto w = (-P.v - C.h()) % P.u;
    conj[i] = fb.lookup.at(prime_key(P.u, w));
  }

  const u64 target = r >= 1.0 ? ~u64{0} : static_cast<u64>(std::ceil(std::pow(static_cast<double>(q), r)));
  std::vector<bool> large(fb.primes.size(), false);
  u64 kept = 0;
  for (u32 i = 0; i < fb.primes.size(); ++i) {
    if (fb.primes[i].degree() != 1) continue;
    // conjugates share u and sit next to each other, so pairs stay whole
    if (kept >= target && !(i > 0 && conj[i] == i - 1 && !large[i - 1])) large[i] = true;
    if (large[i]) {
      fb.large_primes.push_back(i);
    } else {
      fb.reduced_subset.push_back(i);
      ++kept;
    }
  }

  fb.slots.assign(fb.primes.size(), {});
  std::vector<bool> done(fb.primes.size(), false);
  for (u32 i = 0; i < fb.primes.size(); ++i) {
    if (done[i]) continue;
    PairColumn col{i, conj[i], conj[i] == i};
    auto& list = large[i] ? fb.large_pairs : fb.columns;
    const u32 idx = static_cast<u32>(list.size());
    list.push_back(col);
    fb.slots[i] = {large[i], idx, 1};
    fb.slots[conj[i]] = {large[i], idx, conj[i] == i ? 1 : -1};
    done[i] = done[conj[i]] = true;
  }
  return fb;
}

}  // namespace dlkit::curve_ic
