#include "dlkit/ff/residue.hpp"

#include "dlkit/error.hpp"

namespace dlkit::ff {

BigInt mod_floor(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

BigInt inverse_mod(const BigInt& a, const BigInt& m) {
  BigInt old_r = mod_floor(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) return 0;
  return mod_floor(old_s, m);
}

Residue::Residue(BigInt value, BigInt modulus) : modulus_(std::move(modulus)) {
  if (modulus_ <= 0) throw Error(ErrorCode::DomainError, "residue modulus must be positive");
  value_ = mod_floor(value, modulus_);
}

namespace {
void check_same(const Residue& a, const Residue& b) {
  if (a.modulus() != b.modulus()) throw Error(ErrorCode::SpecMismatch, "residues with different moduli");
}
}  // namespace

Residue Residue::operator+(const Residue& o) const {
  check_same(*this, o);
  return {value_ + o.value_, modulus_};
}
Residue Residue::operator-(const Residue& o) const {
  check_same(*this, o);
  return {value_ - o.value_, modulus_};
}
Residue Residue::operator*(const Residue& o) const {
  check_same(*this, o);
  return {value_ * o.value_, modulus_};
}
Residue Residue::inv() const {
  if (modulus_ == 1) return *this;
  BigInt i = inverse_mod(value_, modulus_);
  if (i == 0) throw Error(ErrorCode::DivisionByZero, "residue not invertible");
  return {i, modulus_};
}

std::string Residue::to_string() const { return value_.str() + " mod " + modulus_.str(); }

Residue crt_combine(std::span<const Residue> residues) {
  if (residues.empty()) return {0, 1};
  BigInt x = residues[0].value();
  BigInt m = residues[0].modulus();
  for (std::size_t i = 1; i < residues.size(); ++i) {
    const BigInt& mi = residues[i].modulus();
    if (gcd(m, mi) != 1) throw Error(ErrorCode::NonCoprimeModuli, m.str() + " and " + mi.str());
    // x' = x + m * ((r_i - x) * m^{-1} mod m_i)
    BigInt t = mod_floor((residues[i].value() - x) * inverse_mod(m, mi), mi);
    x += m * t;
    m *= mi;
  }
  return {x, m};
}

}  // namespace dlkit::ff
