#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "dlkit/ff/rng.hpp"

namespace dlkit::ff {

enum class FieldKind { prime, binary };

// Description of F_p (p < 2^62) or F_{2^m} = F_2[X]/(modulus), m <= 62.
// Elements are canonical 64-bit values: an integer in [0, p) or the bit
// vector of a binary polynomial of degree < m (bit i = coefficient of X^i).
// All arithmetic lives here so that polynomial code can run over either kind.
class FieldSpec {
 public:
  FieldSpec() = default;

  static FieldSpec prime(std::uint64_t p);
  static FieldSpec binary(unsigned m);  // least irreducible modulus of degree m
  static FieldSpec binary(unsigned m, std::uint64_t modulus);
  // "prime:7" or "binary:31:0x80000009"; "binary:8" selects the default modulus.
  static FieldSpec parse(std::string_view text);
  std::string to_string() const;

  FieldKind kind() const { return kind_; }
  bool is_binary() const { return kind_ == FieldKind::binary; }
  std::uint64_t characteristic() const { return kind_ == FieldKind::prime ? p_ : 2; }
  unsigned degree() const { return kind_ == FieldKind::prime ? 1 : m_; }
  std::uint64_t modulus() const { return kind_ == FieldKind::prime ? p_ : modulus_; }
  // Field size q.
  std::uint64_t order() const { return kind_ == FieldKind::prime ? p_ : (std::uint64_t{1} << m_); }

  bool contains(std::uint64_t v) const { return v < order(); }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    if (kind_ == FieldKind::binary) return a ^ b;
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    if (kind_ == FieldKind::binary) return a ^ b;
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint64_t neg(std::uint64_t a) const {
    if (kind_ == FieldKind::binary || a == 0) return a;
    return p_ - a;
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    if (kind_ == FieldKind::prime) {
      if (small_) return a * b % p_;
      return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p_);
    }
    return binary_mul(a, b);
  }
  std::uint64_t sqr(std::uint64_t a) const { return mul(a, a); }
  std::uint64_t inv(std::uint64_t a) const;  // throws DivisionByZero
  std::uint64_t div(std::uint64_t a, std::uint64_t b) const { return mul(a, inv(b)); }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  // Integer n mapped into the prime subfield.
  std::uint64_t from_int(std::int64_t n) const;
  // Unique square root in characteristic 2 (Frobenius inverse).
  std::uint64_t sqrt_char2(std::uint64_t a) const;
  // Absolute trace to F_2 (binary fields only).
  unsigned trace(std::uint64_t a) const;

  std::uint64_t random(Rng& rng) const { return rng.below(order()); }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_ && a.m_ == b.m_ && a.modulus_ == b.modulus_;
  }

 private:
  std::uint64_t binary_mul(std::uint64_t a, std::uint64_t b) const;

  FieldKind kind_ = FieldKind::prime;
  std::uint64_t p_ = 2;
  unsigned m_ = 0;
  std::uint64_t modulus_ = 0;
  bool small_ = true;
};

// Value type carrying its field, used at API boundaries; inner loops work on
// raw values through FieldSpec.
class FieldElement {
 public:
  FieldElement(FieldSpec spec, std::uint64_t value);

  const FieldSpec& spec() const { return spec_; }
  std::uint64_t value() const { return value_; }
  bool is_zero() const { return value_ == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const { return {spec_, spec_.neg(value_)}; }
  FieldElement inv() const { return {spec_, spec_.inv(value_)}; }
  FieldElement pow(std::uint64_t e) const { return {spec_, spec_.pow(value_, e)}; }

  // Canonical serialization: fixed-width little-endian bytes of the value.
  std::string serialize() const;

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.spec_ == b.spec_ && a.value_ == b.value_;
  }

 private:
  FieldSpec spec_;
  std::uint64_t value_;
};

enum class FieldOp { add, sub, mul, div, inv, pow };

// Dispatching form; for pow the exponent is b.value().
FieldElement field_arith(const FieldElement& a, const FieldElement& b, FieldOp op);

FieldElement random_element(const FieldSpec& spec, Rng& rng);

// Binary polynomials packed in a word (bit i = coefficient of X^i).
namespace gf2x {
unsigned degree(std::uint64_t a);  // degree of 0 is reported as 0
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t mod);
std::uint64_t gcd(std::uint64_t a, std::uint64_t b);
bool is_irreducible(std::uint64_t f);
std::uint64_t least_irreducible(unsigned m);
}  // namespace gf2x

}  // namespace dlkit::ff
