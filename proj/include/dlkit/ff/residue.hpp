#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <span>
#include <string>

namespace dlkit::ff {

using BigInt = boost::multiprecision::cpp_int;

// Element of Z/NZ with arbitrary-precision modulus.
class Residue {
 public:
  Residue(BigInt value, BigInt modulus);

  const BigInt& value() const { return value_; }
  const BigInt& modulus() const { return modulus_; }

  Residue operator+(const Residue& o) const;
  Residue operator-(const Residue& o) const;
  Residue operator*(const Residue& o) const;
  // Throws DivisionByZero if not invertible.
  Residue inv() const;

  std::string to_string() const;

  friend bool operator==(const Residue& a, const Residue& b) = default;

 private:
  BigInt value_;
  BigInt modulus_;
};

BigInt mod_floor(const BigInt& a, const BigInt& m);
// Inverse of a modulo m, or 0 if gcd(a, m) != 1.
BigInt inverse_mod(const BigInt& a, const BigInt& m);

// Throws NonCoprimeModuli when two moduli share a factor.
Residue crt_combine(std::span<const Residue> residues);

}  // namespace dlkit::ff
