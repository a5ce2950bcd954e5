#include "dlkit/poly/polynomial.hpp"

#include <algorithm>
#include <charconv>

#include "dlkit/error.hpp"

namespace dlkit::poly {

Polynomial::Polynomial(const FieldSpec& field, std::vector<u64> coeffs)
    : field_(field), c_(std::move(coeffs)) {
  for (u64 c : c_) {
    if (!field_.contains(c)) throw Error(ErrorCode::DomainError, "coefficient outside field");
  }
  normalize();
}

void Polynomial::normalize() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Polynomial Polynomial::constant(const FieldSpec& field, u64 c) { return Polynomial(field, {c}); }

Polynomial Polynomial::monomial(const FieldSpec& field, u64 c, unsigned degree) {
  std::vector<u64> v(degree + 1, 0);
  v[degree] = c;
  return Polynomial(field, std::move(v));
}

Polynomial Polynomial::parse(const FieldSpec& field, std::string_view text) {
  std::vector<u64> v;
  while (!text.empty()) {
    auto pos = text.find(',');
    std::string_view tok = text.substr(0, pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    int base = 10;
    if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) {
      tok.remove_prefix(2);
      base = 16;
    }
    u64 c = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), c, base);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty()) {
      throw Error(ErrorCode::ParseError, "bad coefficient '" + std::string(tok) + "'");
    }
    v.push_back(c);
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return Polynomial(field, std::move(v));
}

std::string Polynomial::to_string() const {
  if (c_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(c_[i]);
  }
  return s;
}

u64 Polynomial::eval(u64 x) const {
  u64 r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = field_.add(field_.mul(r, x), *it);
  return r;
}

Polynomial Polynomial::scaled(u64 c) const {
  Polynomial r(field_);
  if (c == 0) return r;
  r.c_.resize(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = field_.mul(c_[i], c);
  return r;
}

Polynomial Polynomial::monic() const {
  if (c_.empty() || c_.back() == 1) return *this;
  return scaled(field_.inv(c_.back()));
}

Polynomial Polynomial::derivative() const {
  Polynomial r(field_);
  if (c_.size() <= 1) return r;
  r.c_.resize(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) {
    r.c_[i - 1] = field_.mul(c_[i], field_.from_int(static_cast<std::int64_t>(i % field_.characteristic())));
  }
  r.normalize();
  return r;
}

Polynomial Polynomial::shifted(unsigned k) const {
  if (c_.empty()) return *this;
  Polynomial r(field_);
  r.c_.assign(k, 0);
  r.c_.insert(r.c_.end(), c_.begin(), c_.end());
  return r;
}

Polynomial Polynomial::compose(const Polynomial& inner) const {
  Polynomial r(field_);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * inner + constant(field_, *it);
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (u64& c : r.c_) c = field_.neg(c);
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = field_.add(c_[i], o.c_[i]);
  normalize();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = field_.sub(c_[i], o.c_[i]);
  normalize();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r(a.field_);
  if (a.c_.empty() || b.c_.empty()) return r;
  const FieldSpec& F = a.field_;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      r.c_[i + j] = F.add(r.c_[i + j], F.mul(a.c_[i], b.c_[j]));
    }
  }
  r.normalize();
  return r;
}

bool operator<(const Polynomial& a, const Polynomial& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return std::lexicographical_compare(a.c_.rbegin(), a.c_.rend(), b.c_.rbegin(), b.c_.rend());
}

std::pair<Polynomial, Polynomial> divrem(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
  const FieldSpec& F = a.field();
  if (a.degree() < b.degree()) return {Polynomial(F), a};
  std::vector<u64> r = a.coeffs();
  const auto& bc = b.coeffs();
  const int db = b.degree();
  const u64 inv_lead = F.inv(b.lead());
  std::vector<u64> q(a.degree() - db + 1, 0);
  for (int i = a.degree(); i >= db; --i) {
    u64 c = r[i];
    if (c == 0) continue;
    c = F.mul(c, inv_lead);
    q[i - db] = c;
    for (int j = 0; j <= db; ++j) r[i - db + j] = F.sub(r[i - db + j], F.mul(c, bc[j]));
  }
  r.resize(db);
  return {Polynomial(F, std::move(q)), Polynomial(F, std::move(r))};
}

Polynomial operator%(const Polynomial& a, const Polynomial& b) {
  if (a.degree() < b.degree() && !b.is_zero()) return a;
  return divrem(a, b).second;
}

Polynomial operator/(const Polynomial& a, const Polynomial& b) { return divrem(a, b).first; }

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Xgcd xgcd(const Polynomial& a, const Polynomial& b) {
  const FieldSpec& F = a.field();
  Polynomial r0 = a, r1 = b;
  Polynomial s0 = Polynomial::constant(F, 1), s1(F);
  Polynomial t0(F), t1 = Polynomial::constant(F, 1);
  while (!r1.is_zero()) {
    auto [q, r] = divrem(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Polynomial s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    Polynomial t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  u64 inv = F.inv(r0.lead());
  return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

Polynomial mulmod(const Polynomial& a, const Polynomial& b, const Polynomial& m) { return (a * b) % m; }

Polynomial powmod(const Polynomial& base, u64 exp, const Polynomial& m) {
  const FieldSpec& F = base.field();
  Polynomial result = Polynomial::constant(F, 1) % m;
  Polynomial b = base % m;
  while (exp) {
    if (exp & 1) result = mulmod(result, b, m);
    exp >>= 1;
    if (exp) b = mulmod(b, b, m);
  }
  return result;
}

Polynomial invmod(const Polynomial& a, const Polynomial& m) {
  Xgcd x = xgcd(a % m, m);
  if (!x.g.is_one()) throw Error(ErrorCode::DivisionByZero, "polynomial not invertible modulo m");
  return x.s % m;
}

PolyArithResult poly_arith(const Polynomial& a, const Polynomial& b, PolyOp op, const Polynomial* modulus) {
  if (!(a.field() == b.field())) throw Error(ErrorCode::SpecMismatch, "polynomials over different fields");
  switch (op) {
    case PolyOp::add: return {a + b, {}};
    case PolyOp::sub: return {a - b, {}};
    case PolyOp::mul: return {a * b, {}};
    case PolyOp::divrem: {
      auto [q, r] = divrem(a, b);
      return {q, r};
    }
    case PolyOp::gcd: return {gcd(a, b), {}};
    case PolyOp::modexp:
      if (!modulus) throw Error(ErrorCode::DomainError, "modexp needs a modulus");
      return {powmod(a, b.coeff(0), *modulus), {}};
  }
  return {};
}

}  // namespace dlkit::poly
