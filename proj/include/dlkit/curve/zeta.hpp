#pragma once

#include <vector>

#include "dlkit/curve/curve.hpp"

namespace dlkit::curve {

// #C(F_{q^k}) including the point at infinity, by enumeration of F_{q^k}.
// Throws CapExceeded when q^k exceeds `cap`.
u64 count_points(const HyperellipticCurve& C, unsigned k, u64 cap = 400'000'000);

// Coefficients a_0..a_{2g} of L(T) = prod (1 - alpha_i T) rebuilt from
// N_1..N_g with Newton's identities and a_{2g-j} = q^{g-j} a_j.
std::vector<__int128> l_polynomial(const HyperellipticCurve& C, const std::vector<u64>& counts);

struct WeilInterval {
  u64 lo, hi;
};
WeilInterval weil_interval(u64 q, unsigned g);

struct JacobianOrderOptions {
  u64 cap = 1'000'000'000'000ULL;  // bound on q^g
  u64 count_cap = 50'000'000;      // largest extension field enumerated
  u64 seed = 1;
  unsigned check_divisors = 6;
};

struct JacobianOrderReport {
  u64 order;
  std::vector<u64> counts;  // N_1..N_k actually counted
  bool from_zeta_only;      // false: interval search finished the job
  u64 candidates_lo = 0, candidates_hi = 0;
};

// #J(F_q) = L(1). When q^g > count_cap the counts N_1..N_k (q^k <= count_cap)
// bound L(1) to an interval, which is searched by baby-step giant-step on
// random divisors; more divisors filter the candidates (AmbiguousOrder if
// several survive). Throws CapExceeded when q^g > cap.
JacobianOrderReport jacobian_order_report(const HyperellipticCurve& C, const JacobianOrderOptions& opt = {});
u64 jacobian_order(const HyperellipticCurve& C, const JacobianOrderOptions& opt = {});

}  // namespace dlkit::curve
