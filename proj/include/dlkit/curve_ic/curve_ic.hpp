#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dlkit/curve/curve.hpp"
#include "dlkit/ff/residue.hpp"

namespace dlkit::curve_ic {

using curve::Divisor;
using curve::HyperellipticCurve;
using curve::PrimeDivisor;
using ff::BigInt;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

enum class Strategy { full_b, harley, single_lp, double_lp };
Strategy parse_strategy(std::string_view name);
std::string_view to_string(Strategy s);
// Size exponent of the reduced factor base: 1 for full_b, 1 - 1/(g+1) for
// harley, 1 - 2/(2g+1) with one large prime, 1 - 1/g with two.
double default_exponent(Strategy s, unsigned genus);
unsigned max_large_primes(Strategy s);

// A prime P and its image under the hyperelliptic involution share one
// column: P counts +1, the conjugate -1 (their sum is principal). Ramified
// primes are their own conjugate and have order 2 in the Jacobian.
struct PairColumn {
  u32 prime = 0;
  u32 conjugate = 0;
  bool ramified = false;
};

struct CurveFactorBase {
  unsigned B = 1;
  double r = 1.0;
  std::vector<PrimeDivisor> primes;   // every prime of degree <= B, sorted by (u, v)
  std::vector<u32> reduced_subset;    // degree-1 primes kept in the base
  std::vector<u32> large_primes;      // degree-1 primes left out by the reduction
  std::vector<PairColumn> columns;    // relation-matrix columns
  std::vector<PairColumn> large_pairs;

  struct Slot {
    bool large = false;
    u32 index = 0;  // into columns or large_pairs
    int sign = 1;
  };
  std::vector<Slot> slots;  // parallel to primes

  std::optional<u32> find(const PrimeDivisor& P) const;
  std::size_t ramified_columns() const;

  std::unordered_map<std::string, u32> lookup;
};

// Throws CapExceeded when q^B exceeds cap.
CurveFactorBase build_factor_base(const HyperellipticCurve& C, unsigned B, double r = 1.0,
                                  u64 cap = 5'000'000);

// a*P + b*Q = sum over fb of e * (column prime) + sum over lp of c * (large prime).
// lp holds large-pair indices with coefficients +-1.
struct PartialRelation {
  u64 a = 0, b = 0;
  std::vector<std::pair<u32, i64>> fb;
  std::vector<std::pair<u32, int>> lp;
  bool full() const { return lp.empty(); }
  friend bool operator==(const PartialRelation&, const PartialRelation&) = default;
};

// Exact re-check in the Jacobian; P and Q must have order dividing ell.
bool verify_relation(const HyperellipticCurve& C, const Divisor& P, const Divisor& Q,
                     const CurveFactorBase& fb, const PartialRelation& rel);
// Principal relations (no P, Q part) sum to the identity.
bool verify_principal(const HyperellipticCurve& C, const CurveFactorBase& fb, const PartialRelation& rel);

struct WalkParams {
  u64 ell = 0;          // order of P; 0 tracks a, b modulo 2^64 and disables verification
  std::size_t count = 0;  // stop after this many emitted relations (0: no limit)
  unsigned max_lp = 0;
  u64 max_steps = 0;    // 0: no limit (count must then be set)
  u64 seed = 1;
  bool verify = true;
  u64 restart = 1'000'000;
  double budget_secs = 0;
  unsigned workers = 1;
};

struct WalkStats {
  u64 steps = 0, full = 0, single = 0, twice = 0, rejected = 0, restarts = 0;
  u64 cycles = 0;  // restarts forced by revisiting a smooth point
  u64 smooth() const { return full + single + twice + rejected; }
};

// Adding walk R -> R + T_j with 20 precomputed T_j = alpha_j P + beta_j Q;
// every visited R whose u splits into primes of degree <= B is decomposed
// and classified. Throws TimeBudgetExceeded.
std::vector<PartialRelation> walk_relations(const HyperellipticCurve& C, const Divisor& P, const Divisor& Q,
                                            const CurveFactorBase& fb, const WalkParams& params,
                                            WalkStats* stats = nullptr);

struct AdhParams {
  std::size_t count = 0;
  u64 max_trials = 0;
  int v_degree = -1;  // negative: genus
  u64 seed = 1;
};
struct AdhStats {
  u64 trials = 0, smooth = 0;
};

// Divisors of Y - v(X): the norm v^2 + h v - f is factored and each factor
// P^e contributes e * (P, v mod P). Only relations inside the base are kept.
std::vector<PartialRelation> adh_relations(const HyperellipticCurve& C, const CurveFactorBase& fb,
                                           const AdhParams& params, AdhStats* stats = nullptr);

// k partials on the same large prime give k - 1 full relations.
std::vector<PartialRelation> recombine_single_lp(const std::vector<PartialRelation>& partials, u64 ell);

struct LpGraphStats {
  std::size_t edges = 0, vertices = 0, components = 0;
  std::size_t unbalanced = 0;  // components without the 1-node left with an odd signed cycle
  std::size_t duplicates = 0;
  std::size_t cycle_space() const { return edges - vertices + components; }
};

// Graph on large primes plus a node for "1"; one-lp partials join their
// prime to that node. Every cycle closed by a new edge gives one relation.
std::vector<PartialRelation> recombine_double_lp(const std::vector<PartialRelation>& partials, u64 ell,
                                                 LpGraphStats* stats = nullptr);

// Integer combination sum coeffs[i] * rels[i]; a, b reduced mod ell (or 2^64).
PartialRelation combine(const std::vector<const PartialRelation*>& rels, const std::vector<i64>& coeffs,
                        u64 ell);

// x with a_i + b_i x = sum e_ij log_j for all rows, from a left-kernel vector
// of the exponent matrix (ramified columns have log 0 mod odd ell).
std::optional<u64> log_from_relations(const std::vector<PartialRelation>& rels, const CurveFactorBase& fb,
                                      u64 ell, u64 seed = 1);

struct DlogOptions {
  Strategy strategy = Strategy::harley;
  double r = -1;  // negative: default_exponent
  unsigned B = 1;
  unsigned extra = 10;
  u64 seed = 1;
  unsigned workers = 1;
  double budget_secs = 0;
  unsigned max_rounds = 6;
  u64 first_batch = 20'000;
};

struct DlogReport {
  u64 ell = 0;
  double r = 1;
  std::size_t columns = 0;
  std::size_t fulls = 0, partials = 0, recombined = 0;
  std::size_t repeats = 0;  // walk relations dropped as exact repeats
  WalkStats walk;
  unsigned kernel_attempts = 0;
  unsigned ic_digits = 0;  // solve_jacobian_dlog: digits found by index calculus
};

// x mod ell with x P = Q, P of prime order ell. Throws NotInSubgroup,
// RankDeficient, TimeBudgetExceeded.
u64 subgroup_dlog(const HyperellipticCurve& C, const Divisor& P, const Divisor& Q, u64 ell,
                  const CurveFactorBase& fb, const DlogOptions& options, DlogReport* report = nullptr);

// A subgroup of order ell holds about ell / g! smooth divisors; index
// calculus is used only when that is several times the relations needed.
bool index_calculus_applies(const HyperellipticCurve& C, u64 ell, const CurveFactorBase& fb, unsigned extra);

// Full dlog for P of order N: index calculus on the largest prime factor of
// N when it is above 1000 and index_calculus_applies, baby-step giant-step
// on the rest, then CRT.
u64 solve_jacobian_dlog(const HyperellipticCurve& C, const Divisor& P, const Divisor& Q, u64 N,
                        const DlogOptions& options, DlogReport* report = nullptr);

// (N / ell) * D for random D until nonzero; N is the group order.
Divisor random_subgroup_element(const HyperellipticCurve& C, u64 N, u64 ell, ff::Rng& rng);

struct GroupStructure {
  std::vector<BigInt> invariants;  // d_1 | d_2 | ..., all > 1
  BigInt order;
  std::size_t rank = 0;
};

// Relation lattice over all columns (ramified columns get the extra row 2e)
// in Hermite then Smith form. Throws RankDeficient below full rank.
GroupStructure group_structure(const std::vector<PartialRelation>& relations, const CurveFactorBase& fb);

// "a b | col:e ... | lp:c ..." one relation per line.
void write_relations(std::ostream& os, const std::vector<PartialRelation>& rels);
std::vector<PartialRelation> read_relations(std::istream& is);

}  // namespace dlkit::curve_ic
