#include "dlkit/ff/field.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <vector>

#include "dlkit/error.hpp"
#include "dlkit/ff/numtheory.hpp"

namespace dlkit::ff {

namespace gf2x {

unsigned degree(std::uint64_t a) { return a == 0 ? 0 : 63 - std::countl_zero(a); }

namespace {

// Carry-less 64x64 -> 128 multiply, portable shift-and-xor.
void clmul(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  hi = 0;
  lo = 0;
  while (b) {
    int i = std::countr_zero(b);
    b &= b - 1;
    lo ^= a << i;
    if (i) hi ^= a >> (64 - i);
  }
}

std::uint64_t reduce(std::uint64_t hi, std::uint64_t lo, std::uint64_t mod) {
  const unsigned m = degree(mod);
  // Clear bits >= m from the top down.
  for (int i = 127; i >= static_cast<int>(m); --i) {
    bool set = i >= 64 ? (hi >> (i - 64)) & 1 : (lo >> i) & 1;
    if (!set) continue;
    unsigned shift = i - m;
    if (shift >= 64) {
      hi ^= mod << (shift - 64);
    } else {
      lo ^= mod << shift;
      if (shift) hi ^= mod >> (64 - shift);
    }
  }
  return lo;
}

}  // namespace

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
  const unsigned m = degree(mod);
  if (m <= 32) {
    std::uint64_t r = 0;
    std::uint64_t x = a;
    while (b) {
      if (b & 1) r ^= x;
      b >>= 1;
      x <<= 1;
    }
    for (int i = 2 * static_cast<int>(m) - 2; i >= static_cast<int>(m); --i) {
      if ((r >> i) & 1) r ^= mod << (i - m);
    }
    return r;
  }
  std::uint64_t hi, lo;
  clmul(a, b, hi, lo);
  return reduce(hi, lo, mod);
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    unsigned db = degree(b);
    while (a && degree(a) >= db) a ^= b << (degree(a) - db);
    std::swap(a, b);
  }
  return a;
}

namespace {
std::uint64_t mod_poly(std::uint64_t a, std::uint64_t f) {
  unsigned df = degree(f);
  while (a && degree(a) >= df) a ^= f << (degree(a) - df);
  return a;
}
}  // namespace

bool is_irreducible(std::uint64_t f) {
  const unsigned m = degree(f);
  if (f == 0 || m == 0) return false;
  if (m == 1) return true;
  if ((f & 1) == 0) return false;
  // Rabin: X^(2^m) == X mod f and gcd(X^(2^(m/r)) - X, f) == 1 for primes r | m.
  std::vector<unsigned> primes;
  for (unsigned r = 2, k = m; r <= k; ++r) {
    if (k % r == 0) {
      primes.push_back(r);
      while (k % r == 0) k /= r;
    }
  }
  const std::uint64_t x = mod_poly(2, f);
  for (unsigned r : primes) {
    std::uint64_t t = x;
    for (unsigned i = 0; i < m / r; ++i) t = mulmod(t, t, f);
    if (gcd(f, t ^ x) != 1) return false;
  }
  std::uint64_t t = x;
  for (unsigned i = 0; i < m; ++i) t = mulmod(t, t, f);
  return t == x;
}

std::uint64_t least_irreducible(unsigned m) {
  if (m == 0 || m > 62) throw Error(ErrorCode::DomainError, "binary field degree must be in [1, 62]");
  for (std::uint64_t f = (std::uint64_t{1} << m) | 1;; f += 2) {
    if (is_irreducible(f)) return f;
  }
}

}  // namespace gf2x

FieldSpec FieldSpec::prime(std::uint64_t p) {
  if (p >= (std::uint64_t{1} << 62) || !is_prime(p)) {
    throw Error(ErrorCode::DomainError, "prime field needs a prime p < 2^62, got " + std::to_string(p));
  }
  FieldSpec s;
  s.kind_ = FieldKind::prime;
  s.p_ = p;
  s.m_ = 1;
  s.small_ = p < (std::uint64_t{1} << 32);
  return s;
}

FieldSpec FieldSpec::binary(unsigned m) { return binary(m, gf2x::least_irreducible(m)); }

FieldSpec FieldSpec::binary(unsigned m, std::uint64_t modulus) {
  if (m == 0 || m > 62) throw Error(ErrorCode::DomainError, "binary field degree must be in [1, 62]");
  if (gf2x::degree(modulus) != m || !gf2x::is_irreducible(modulus)) {
    throw Error(ErrorCode::DomainError, "modulus is not irreducible of degree " + std::to_string(m));
  }
  FieldSpec s;
  s.kind_ = FieldKind::binary;
  s.p_ = 2;
  s.m_ = m;
  s.modulus_ = modulus;
  return s;
}

namespace {
std::uint64_t parse_u64(std::string_view t) {
  int base = 10;
  if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) {
    t.remove_prefix(2);
    base = 16;
  }
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v, base);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw Error(ErrorCode::ParseError, "bad integer '" + std::string(t) + "'");
  }
  return v;
}
}  // namespace

FieldSpec FieldSpec::parse(std::string_view text) {
  std::vector<std::string_view> parts;
  while (true) {
    auto pos = text.find(':');
    parts.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  if (parts[0] == "prime" && parts.size() == 2) return prime(parse_u64(parts[1]));
  if (parts[0] == "binary" && parts.size() == 2) return binary(static_cast<unsigned>(parse_u64(parts[1])));
  if (parts[0] == "binary" && parts.size() == 3) {
    return binary(static_cast<unsigned>(parse_u64(parts[1])), parse_u64(parts[2]));
  }
  throw Error(ErrorCode::ParseError, "unrecognized field spec");
}

std::string FieldSpec::to_string() const {
  if (kind_ == FieldKind::prime) return "prime:" + std::to_string(p_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(modulus_));
  return "binary:" + std::to_string(m_) + ":" + buf;
}

std::uint64_t FieldSpec::binary_mul(std::uint64_t a, std::uint64_t b) const {
  return gf2x::mulmod(a, b, modulus_);
}

std::uint64_t FieldSpec::inv(std::uint64_t a) const {
  if (a == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  if (kind_ == FieldKind::prime) return *invmod(a, p_);
  // Extended Euclid over F_2[X].
  std::uint64_t r0 = modulus_, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 1) {
    // r0 = q*r1 + r, done by repeated shifting.
    while (r0 && gf2x::degree(r0) >= gf2x::degree(r1)) {
      unsigned sh = gf2x::degree(r0) - gf2x::degree(r1);
      r0 ^= r1 << sh;
      s0 ^= s1 << sh;
    }
    std::swap(r0, r1);
    std::swap(s0, s1);
  }
  // s1 may exceed degree m-1 only transiently; reduce.
  return gf2x::mulmod(s1, 1, modulus_);
}

std::uint64_t FieldSpec::pow(std::uint64_t a, std::uint64_t e) const {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t FieldSpec::from_int(std::int64_t n) const {
  if (kind_ == FieldKind::binary) return static_cast<std::uint64_t>(n & 1);
  std::int64_t r = n % static_cast<std::int64_t>(p_);
  if (r < 0) r += static_cast<std::int64_t>(p_);
  return static_cast<std::uint64_t>(r);
}

std::uint64_t FieldSpec::sqrt_char2(std::uint64_t a) const {
  // a^(2^(m-1)) is the inverse of Frobenius.
  for (unsigned i = 0; i + 1 < m_; ++i) a = mul(a, a);
  return a;
}

unsigned FieldSpec::trace(std::uint64_t a) const {
  std::uint64_t t = a, x = a;
  for (unsigned i = 1; i < m_; ++i) {
    x = mul(x, x);
    t ^= x;
  }
  return static_cast<unsigned>(t & 1);
}

FieldElement::FieldElement(FieldSpec spec, std::uint64_t value) : spec_(spec), value_(value) {
  if (!spec_.contains(value_)) throw Error(ErrorCode::DomainError, "value outside field");
}

namespace {
void check_same(const FieldElement& a, const FieldElement& b) {
  if (!(a.spec() == b.spec())) throw Error(ErrorCode::SpecMismatch, "operands from different fields");
}
}  // namespace

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_same(*this, o);
  return {spec_, spec_.add(value_, o.value_)};
}
FieldElement FieldElement::operator-(const FieldElement& o) const {
  check_same(*this, o);
  return {spec_, spec_.sub(value_, o.value_)};
}
FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same(*this, o);
  return {spec_, spec_.mul(value_, o.value_)};
}
FieldElement FieldElement::operator/(const FieldElement& o) const {
  check_same(*this, o);
  return {spec_, spec_.div(value_, o.value_)};
}

std::string FieldElement::serialize() const {
  const unsigned bits = std::bit_width(spec_.order() - 1);
  const unsigned bytes = bits == 0 ? 1 : (bits + 7) / 8;
  std::string out(bytes, '\0');
  for (unsigned i = 0; i < bytes; ++i) out[i] = static_cast<char>((value_ >> (8 * i)) & 0xff);
  return out;
}

FieldElement field_arith(const FieldElement& a, const FieldElement& b, FieldOp op) {
  switch (op) {
    case FieldOp::add: return a + b;
    case FieldOp::sub: return a - b;
    case FieldOp::mul: return a * b;
    case FieldOp::div: return a / b;
    case FieldOp::inv: return a.inv();
    case FieldOp::pow: return a.pow(b.value());
  }
  return a;
}

FieldElement random_element(const FieldSpec& spec, Rng& rng) { return {spec, spec.random(rng)}; }

}  // namespace dlkit::ff
