#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlkit/ff/field.hpp"

namespace dlkit::poly {

using ff::FieldSpec;
using u64 = std::uint64_t;

// Dense univariate polynomial; coefficient i multiplies X^i. The zero
// polynomial has no coefficients and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(const FieldSpec& field) : field_(field) {}
  Polynomial(const FieldSpec& field, std::vector<u64> coeffs);

  static Polynomial constant(const FieldSpec& field, u64 c);
  static Polynomial monomial(const FieldSpec& field, u64 c, unsigned degree);
  static Polynomial x(const FieldSpec& field) { return monomial(field, 1, 1); }
  // "1,1,0,1" is 1 + X + X^3 (constant term first).
  static Polynomial parse(const FieldSpec& field, std::string_view text);
  std::string to_string() const;

  const FieldSpec& field() const { return field_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  u64 coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  u64 lead() const { return c_.empty() ? 0 : c_.back(); }
  const std::vector<u64>& coeffs() const { return c_; }

  u64 eval(u64 x) const;
  Polynomial scaled(u64 c) const;
  Polynomial monic() const;
  Polynomial derivative() const;
  Polynomial shifted(unsigned k) const;  // times X^k
  // Substitution this(inner(X)).
  Polynomial compose(const Polynomial& inner) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.field_ == b.field_ && a.c_ == b.c_;
  }
  // Ordering by (degree, coefficients from the top); used for canonical lists.
  friend bool operator<(const Polynomial& a, const Polynomial& b);

 private:
  void normalize();

  FieldSpec field_;
  std::vector<u64> c_;
};

// Quotient and remainder; throws DivisionByZero for b == 0.
std::pair<Polynomial, Polynomial> divrem(const Polynomial& a, const Polynomial& b);
Polynomial operator%(const Polynomial& a, const Polynomial& b);
Polynomial operator/(const Polynomial& a, const Polynomial& b);

// Monic gcd (zero if both are zero).
Polynomial gcd(Polynomial a, Polynomial b);

struct Xgcd {
  Polynomial g, s, t;  // s*a + t*b = g, g monic
};
Xgcd xgcd(const Polynomial& a, const Polynomial& b);

Polynomial mulmod(const Polynomial& a, const Polynomial& b, const Polynomial& m);
Polynomial powmod(const Polynomial& base, u64 exp, const Polynomial& m);
// Inverse modulo m; throws DivisionByZero if gcd(a, m) != 1.
Polynomial invmod(const Polynomial& a, const Polynomial& m);

enum class PolyOp { add, sub, mul, divrem, gcd, modexp };

// For modexp the exponent is b's constant coefficient interpreted as an
// integer and the modulus is m.
struct PolyArithResult {
  Polynomial first;
  Polynomial second;
};
PolyArithResult poly_arith(const Polynomial& a, const Polynomial& b, PolyOp op,
                           const Polynomial* modulus = nullptr);

}  // namespace dlkit::poly
