#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "dlkit/ff/field.hpp"
#include "dlkit/ff/rng.hpp"

namespace dlkit::field_ic {

using ff::FieldSpec;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// Elements of F_{2^m} and polynomials over F_2 are both bit masks here.
struct FieldFactorBase {
  FieldSpec field;
  unsigned bound = 0;        // smoothness degree bound B
  std::vector<u64> primes;   // primes[0] is the generator P
  std::unordered_map<u64, std::uint32_t> column;

  std::size_t size() const { return primes.size(); }  // n + 1
};

// Monic irreducibles of degree <= bound, generator first, then by (degree, value).
// P must itself be irreducible of degree <= bound.
FieldFactorBase make_factor_base(const FieldSpec& field, unsigned bound, u64 generator);

// Least element X, X+1, X^2, ... that is primitive and lies in the factor base
// for the given bound.
u64 default_generator(const FieldSpec& field, unsigned bound);
bool is_primitive(const FieldSpec& field, u64 g);

// Predicted cost: relation trials times per-trial work plus linear algebra.
double predicted_cost(unsigned m, unsigned bound);
unsigned choose_B(const FieldSpec& field);

// Exponents of the factorization of `a` (as a polynomial) over the factor
// base; nullopt when some factor has degree above the bound.
std::optional<std::vector<std::pair<std::uint32_t, unsigned>>> factor_over(const FieldFactorBase& fb, u64 a);

// prod_{j>=1} p_j^{a_j} = P^{rhs}
struct FieldRelation {
  std::vector<std::pair<std::uint32_t, i64>> a;  // columns 1..n, sorted
  i64 rhs = 0;                                    // -a_0

  bool verify(const FieldFactorBase& fb) const;
};

struct CollectParams {
  std::size_t count = 0;   // 0: n + 20
  unsigned sparse_k = 16;  // nonzero exponents per trial
  bool dense = false;      // draw all n+1 exponents
  u64 seed = 1;
  unsigned workers = 1;
  u64 max_trials = 50'000'000;
};

struct CollectStats {
  u64 trials = 0;
  u64 smooth = 0;
};

std::vector<FieldRelation> collect_relations(const FieldFactorBase& fb, const CollectParams& params,
                                             CollectStats* stats = nullptr);

// Logarithms of every factor-base prime to base P, modulo N = 2^m - 1.
// Throws RankDeficient when the relations do not determine them.
std::vector<u64> solve_logs(const std::vector<FieldRelation>& rels, const FieldFactorBase& fb, u64 seed = 1);

struct IndividualStats {
  u64 trials = 0;
};
u64 individual_log(u64 Q, const std::vector<u64>& logs, const FieldFactorBase& fb, u64 seed = 1,
                   u64 max_trials = 10'000'000, IndividualStats* stats = nullptr);

struct SolverReport {
  u64 generator = 0;
  unsigned bound = 0;
  std::size_t fb_size = 0;
  std::size_t relations = 0;
  u64 relation_trials = 0;
  u64 individual_trials = 0;
};

// Full pipeline: factor base, relations (more on rank deficiency), logs.
class FieldIndexCalculus {
 public:
  struct Options {
    unsigned bound = 0;  // 0: choose_B
    u64 generator = 0;   // 0: default_generator
    u64 seed = 1;
    unsigned sparse_k = 16;
    bool dense = false;
    std::size_t extra = 20;
    unsigned workers = 1;
  };
  FieldIndexCalculus(const FieldSpec& field, const Options& opt);
  FieldIndexCalculus(const FieldSpec& field) : FieldIndexCalculus(field, Options{}) {}

  const FieldFactorBase& factor_base() const { return fb_; }
  const std::vector<u64>& logs() const { return logs_; }
  u64 generator() const { return fb_.primes[0]; }
  u64 log(u64 Q, u64 seed = 1);
  const SolverReport& report() const { return report_; }

 private:
  FieldFactorBase fb_;
  std::vector<u64> logs_;
  SolverReport report_;
};

// Sparse-matrix text format preceded by a one-line JSON header comment.
void write_relations(std::ostream& os, const FieldFactorBase& fb, const std::vector<FieldRelation>& rels);
std::vector<FieldRelation> read_relations(std::istream& is, FieldFactorBase* fb_out = nullptr);

}  // namespace dlkit::field_ic
