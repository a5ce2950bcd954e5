#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlkit/ff/rng.hpp"
#include "dlkit/poly/factor.hpp"

namespace dlkit::curve {

using ff::FieldSpec;
using poly::Polynomial;
using u64 = std::uint64_t;

// Imaginary hyperelliptic curve y^2 + h(x) y = f(x) with f monic of degree
// 2g + 1 and deg h <= g; one point at infinity.
class HyperellipticCurve {
 public:
  // Throws InvalidCurve when the model is malformed or singular.
  HyperellipticCurve(unsigned genus, Polynomial f, Polynomial h);

  // key=value lines: field=prime:10007, genus=3, f=<coeffs>, h=<coeffs>
  static HyperellipticCurve parse(std::string_view text);
  static HyperellipticCurve load(const std::string& path);
  std::string to_text() const;

  const FieldSpec& field() const { return f_.field(); }
  unsigned genus() const { return g_; }
  const Polynomial& f() const { return f_; }
  const Polynomial& h() const { return h_; }
  u64 q() const { return field().order(); }

  bool on_curve(u64 x, u64 y) const;

 private:
  unsigned g_;
  Polynomial f_, h_;
};

// Mumford pair (u, v): u monic, deg v < deg u <= g, u | v^2 + h v - f.
struct Divisor {
  Polynomial u, v;
  bool is_identity() const { return u.degree() == 0; }
  friend bool operator==(const Divisor& a, const Divisor& b) { return a.u == b.u && a.v == b.v; }
};

Divisor identity(const HyperellipticCurve& C);
bool is_valid(const HyperellipticCurve& C, const Divisor& D);
// Validating constructor; throws InvalidDivisor.
Divisor make_divisor(const HyperellipticCurve& C, Polynomial u, Polynomial v);

Divisor cantor_add(const HyperellipticCurve& C, const Divisor& a, const Divisor& b);
Divisor negate(const HyperellipticCurve& C, const Divisor& D);
Divisor scalar_mul(const HyperellipticCurve& C, const Divisor& D, long long k);
// Reduction of a semi-reduced pair until deg u <= g.
Divisor reduce(const HyperellipticCurve& C, Polynomial u, Polynomial v);

// Jacobian as a group for the generic solvers.
class Jacobian {
 public:
  using Element = Divisor;
  explicit Jacobian(HyperellipticCurve C);
  const HyperellipticCurve& curve() const { return C_; }
  Element identity() const { return curve::identity(C_); }
  Element op(const Element& a, const Element& b) const { return cantor_add(C_, a, b); }
  Element inverse(const Element& a) const { return negate(C_, a); }
  // deg u, then the non-leading coefficients of u, then v padded to deg u.
  std::string canonical_bytes(const Element& a) const;

 private:
  HyperellipticCurve C_;
  unsigned width_;
};

struct PrimeDivisor {
  Polynomial u;  // monic irreducible
  Polynomial v;  // reduced mod u
  unsigned degree() const { return static_cast<unsigned>(u.degree()); }
  friend bool operator==(const PrimeDivisor& a, const PrimeDivisor& b) { return a.u == b.u && a.v == b.v; }
};

struct DivisorFactorization {
  std::vector<std::pair<PrimeDivisor, unsigned>> parts;
};

// Some iff every irreducible factor of u has degree <= bound.
std::optional<DivisorFactorization> decompose(const HyperellipticCurve& C, const Divisor& D, unsigned bound,
                                              ff::Rng& rng);
Divisor recompose(const HyperellipticCurve& C, const DivisorFactorization& F);
Divisor as_divisor(const PrimeDivisor& P);

// Solutions v (mod u) of v^2 + h v - f = 0 for squarefree u; empty when none.
std::vector<Polynomial> mumford_v_candidates(const HyperellipticCurve& C, const Polynomial& u, ff::Rng& rng);

// Close-to-uniform class: sum of three direct samples, each a uniform monic
// squarefree u of degree g with a uniformly chosen valid v (rejection
// weighted by the number of solutions).
Divisor random_divisor(const HyperellipticCurve& C, ff::Rng& rng);
Divisor random_divisor_direct(const HyperellipticCurve& C, ff::Rng& rng);

// Every reduced divisor by brute force over (u, v); tiny curves only.
std::vector<Divisor> enumerate_divisors(const HyperellipticCurve& C, u64 cap = 5'000'000);

}  // namespace dlkit::curve
