#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dlkit/ff/residue.hpp"

namespace dlkit::analysis {

using real = long double;

// L_N(alpha, c) = exp(c (log N)^alpha (log log N)^(1 - alpha)); N is carried
// through its natural logarithm so that arbitrarily large N are representable.
struct SubexpParams {
  real alpha;
  real c;
  real log_n;

  static SubexpParams from_bits(real alpha, real c, real bits);
  static SubexpParams from_int(real alpha, real c, const ff::BigInt& n);
};

// log L_N(alpha, c); throws DomainError outside alpha in (0,1], c > 0, N >= 16.
real subexp_log(const SubexpParams& p);
real subexp_eval(const SubexpParams& p);
// Same value through exp(c * exp(alpha*lnln N + (1-alpha)*lnlnln N)).
real subexp_eval_decomposed(const SubexpParams& p);

// Dickman-de Bruijn rho, tabulated once on [0, u_max] and evaluated by
// integrating u rho'(u) = -rho(u-1) from the nearest grid node.
class DickmanEvaluator {
 public:
  explicit DickmanEvaluator(real u_max = 50, unsigned steps_per_unit = 256);
  real operator()(real u) const;
  real derivative(real u) const;  // -rho(u-1)/u for u > 1
  real u_max() const { return u_max_; }

 private:
  real interpolate(real t) const;  // cubic Hermite on the grid
  real integrate_from_node(std::size_t node, real u) const;

  real u_max_;
  unsigned per_unit_;
  real h_;
  std::vector<real> grid_;
};

real dickman_rho(real u);  // shared evaluator on [0, 50]

// Smoothness estimate: an element of size log L_N(alpha, c) is
// L_N(beta, d)-smooth with probability 1/L_N(alpha - beta, (alpha - beta) c / d).
// o(1) terms are dropped, so the value is an asymptotic prediction.
struct SmoothnessPrediction {
  real alpha;  // alpha - beta
  real c;      // (alpha - beta) c / d
  bool classical;  // alpha = c = 1, beta = 1/2: 1/L(1/2, 1/(2d))
  real log_probability;  // -log L_N(alpha - beta, ...) for the given N
  real probability;
  bool asymptotic = true;
};
SmoothnessPrediction smoothness_probability(real alpha, real c, real beta, real d, real log_n);

// The same prediction for a degree-m polynomial over F_2 tested for B-smoothness:
// N = 2^m, alpha = c = 1, beta = 1/2 and d chosen so that log L_N(1/2, d) = B log 2.
SmoothnessPrediction polynomial_smoothness_prediction(unsigned m, unsigned B);

enum class Family { generic, gaudry_full, harley, single_lp, double_lp, diem_lines, l12_framework, enge_adh, l13 };
std::string_view to_string(Family f);
Family parse_family(std::string_view s);

struct CostModel {
  Family family = Family::generic;
  int g = 0;         // genus
  int d = 0;         // plane degree (diem_lines)
  real theta = 0;    // genus / log q ratio (l12_framework, enge_adh)
  real a0 = 0, b0 = 0;  // l13
};

// Exponent of q for the exponential families, constant of L(1/2) or L(1/3)
// for the subexponential ones. Throws DomainError on invalid parameters.
real cost_exponent(const CostModel& m);

// Positive root of c^2 - (4/9) a0 c - (4/9) b0 = 0.
real l13_c(real a0, real b0);

struct CrossoverRow {
  long long q;
  int g;
  Family best;
  real exponent;
  real generic_exponent;
};
// Argmin over the exponential families for every (q, g); ties go to generic.
std::vector<CrossoverRow> crossover_table(const std::vector<long long>& qs, const std::vector<int>& gs);

// Extra key length needed in genus 3 for equal security against the best
// index-calculus variant: generic(3) / double_lp(3) - 1 = 0.125.
real genus3_key_length_penalty();

}  // namespace dlkit::analysis
