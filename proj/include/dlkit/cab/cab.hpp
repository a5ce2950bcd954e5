#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlkit/curve/curve.hpp"
#include "dlkit/ff/rng.hpp"
#include "dlkit/poly/factor.hpp"

namespace dlkit::cab {

using ff::FieldSpec;
using poly::Polynomial;
using u64 = std::uint64_t;

// Y^a - X^b - sum c_ij X^i Y^j with a i + b j < a b.
class CabCurve {
 public:
  struct Term {
    unsigned i, j;
    u64 c;
  };

  // Throws InvalidCurve (coprimality, characteristic, nonsingularity).
  CabCurve(FieldSpec field, unsigned a, unsigned b, std::vector<Term> terms);

  // key=value lines: field=..., a=3, b=4, cab=(i,j,c),(i,j,c)
  static CabCurve parse(std::string_view text);
  static CabCurve load(const std::string& path);
  std::string to_text() const;

  // y^2 + h y = f as the a = 2 model (odd characteristic), and back.
  static CabCurve from_hyperelliptic(const curve::HyperellipticCurve& H);
  curve::HyperellipticCurve to_hyperelliptic() const;

  const FieldSpec& field() const { return field_; }
  unsigned a() const { return a_; }
  unsigned b() const { return b_; }
  unsigned genus() const { return (a_ - 1) * (b_ - 1) / 2; }
  const std::vector<Term>& terms() const { return terms_; }
  // C = sum_j coefficient(j)(X) Y^j with coefficient(a) = 1.
  const Polynomial& coefficient(unsigned j) const { return coeffs_[j]; }
  // Partial derivatives as polynomials in Y over F_q[X].
  const std::vector<Polynomial>& d_dx() const { return dx_; }
  const std::vector<Polynomial>& d_dy() const { return dy_; }

  u64 eval(u64 x, u64 y) const;
  // C(x, Y) as a polynomial in Y.
  Polynomial fiber(u64 x) const;

 private:
  FieldSpec field_;
  unsigned a_, b_;
  std::vector<Term> terms_;
  std::vector<Polynomial> coeffs_, dx_, dy_;
};

// Resultant of two polynomials in Y with coefficients in F_q[X], by
// fraction-free elimination on the Sylvester matrix.
Polynomial resultant_y(const std::vector<Polynomial>& A, const std::vector<Polynomial>& B);

// Affine F_q-points; the place at infinity is always rational and counted
// separately.
struct RationalPoints {
  std::vector<std::pair<u64, u64>> affine;
  std::size_t count() const { return affine.size() + 1; }
};
RationalPoints degree1_primes(const CabCurve& C, u64 cap = 10'000'000);

// w = r(X) + s(X) Y
struct PlaneFunction {
  Polynomial r, s;
};

// Norm of w to F_q(X): Res_Y(C, s Y + r).
Polynomial norm(const CabCurve& C, const PlaneFunction& w);
// Pole order at infinity: max(a deg r, b + a deg s).
int pole_order(const CabCurve& C, const PlaneFunction& w);

// Generic prime divisor: u monic irreducible, Y = v at its zeros.
struct CabPrime {
  Polynomial u, v;
  unsigned degree() const { return static_cast<unsigned>(u.degree()); }
  friend bool operator==(const CabPrime& x, const CabPrime& y) { return x.u == y.u && x.v == y.v; }
  friend bool operator<(const CabPrime& x, const CabPrime& y) {
    return x.u < y.u || (x.u == y.u && x.v < y.v);
  }
};

// sum mult_k P_k - infinity_mult * infinity = div(w)
struct CabRelation {
  std::vector<std::pair<CabPrime, int>> finite;  // sorted
  int infinity = 0;
  int degree() const;  // sum of mult * deg over finite places
};

enum class DivisorStatus { smooth, not_smooth, ramified, non_generic };

// Divisor of w when its norm is B-smooth. Candidates whose r and s share a
// root report `ramified`; vertical functions whose fibres are not split into
// rational points report `non_generic`; both return nullopt.
std::optional<CabRelation> principal_divisor(const CabCurve& C, const PlaneFunction& w, unsigned bound,
                                             ff::Rng& rng, DivisorStatus* status = nullptr);

// Folds a relation through Cantor arithmetic (a = 2 only); identity iff the
// relation is principal.
curve::Divisor fold_relation(const curve::HyperellipticCurve& H, const CabRelation& rel);

struct LineStats {
  u64 lines = 0;
  u64 relations = 0;
  u64 split = 0;  // residual norm split into linear factors
};

// Lines through two distinct factor-base points with distinct x; a line gives
// a relation when the residual norm of degree d - 2 splits and every point it
// meets lies in the factor base.
std::vector<CabRelation> diem_line_relations(const CabCurve& C, const std::vector<std::pair<u64, u64>>& fb,
                                             std::size_t count, u64 seed, LineStats* stats = nullptr,
                                             u64 max_lines = 10'000'000);

struct L13Plan {
  double a0 = 0, b0 = 0;
  double M = 0;               // log_q(g log q)
  double a_bound = 0, b_bound = 0;
  double c = 0;               // positive root of c^2 - (4/9) a0 c - (4/9) b0
  double d = 0;               // factor-base degree exponent
  double e = 0;               // smoothness constant (a0 c + b0) / 3
  double rs_degree = 0;       // c g^{1/3} M^{2/3}
  double constant = 0;        // (4/3) sqrt(a0 c + b0)
  bool bounds_ok = true;      // a < a_bound and b < b_bound
  bool asymptotic_regime = false;  // g >= (log q)^delta
};
L13Plan plan_l13(const CabCurve& C, double a0, double b0, double delta = 2.0);
L13Plan plan_l13(unsigned a, unsigned b, u64 q, double a0, double b0, double delta = 2.0);
// Same, throwing BoundsViolated when a or b exceed the plan's bounds.
L13Plan plan_l13_strict(const CabCurve& C, double a0, double b0);

struct DescentParams {
  double shrink = 0.8;
  u64 max_trials = 200'000;  // per node
  unsigned extra_r_degree = 3;
  u64 seed = 1;
};

struct DescentNode {
  CabPrime prime;
  unsigned depth;
  CabRelation relation;  // contains `prime` with multiplicity 1
  std::vector<std::size_t> children;
  u64 trials = 0;
};

struct DescentResult {
  // prime = sum mult_k P_k in the class group, every P_k of degree <= bound.
  std::vector<std::pair<CabPrime, long long>> combination;
  std::vector<DescentNode> tree;
  unsigned depth = 0;
};

// Target degree for a node of degree `deg`: max(bound, min(deg - 1, ceil(deg * shrink))).
unsigned descent_target(unsigned deg, unsigned bound, double shrink);

// One step: a relation with the prime at multiplicity 1 and every other
// prime of degree <= target, from functions r + s Y forced through the prime.
// Throws DescentStuck when the trial budget runs out.
CabRelation special_q_step(const CabCurve& C, const CabPrime& Q, unsigned target, const DescentParams& params,
                           ff::Rng& rng, u64* trials = nullptr);

// Recursive driver down to primes of degree <= bound.
DescentResult special_q_descent(const CabCurve& C, const CabPrime& Q, unsigned bound,
                                const DescentParams& params = {});

}  // namespace dlkit::cab
