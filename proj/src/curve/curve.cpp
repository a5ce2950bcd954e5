#include "dlkit/curve/curve.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "dlkit/error.hpp"
#include "dlkit/generic/group.hpp"

namespace dlkit::curve {

using poly::Xgcd;

namespace {

Polynomial zero(const FieldSpec& k) { return Polynomial(k); }
Polynomial one(const FieldSpec& k) { return Polynomial::constant(k, 1); }

// v^2 + h v - f
Polynomial congruence_lhs(const HyperellipticCurve& C, const Polynomial& v) {
  return v * v + C.h() * v - C.f();
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

}  // namespace

HyperellipticCurve::HyperellipticCurve(unsigned genus, Polynomial f, Polynomial h)
    : g_(genus), f_(std::move(f)), h_(std::move(h)) {
  const FieldSpec& k = f_.field();
  if (g_ == 0) throw Error(ErrorCode::InvalidCurve, "genus must be positive");
  if (h_.is_zero() && !(h_.field() == k)) h_ = Polynomial(k);
  if (!(h_.field() == k)) throw Error(ErrorCode::SpecMismatch, "f and h over different fields");
  if (f_.degree() != static_cast<int>(2 * g_ + 1) || !f_.is_monic())
    throw Error(ErrorCode::InvalidCurve, "f must be monic of degree 2g+1");
  if (h_.degree() > static_cast<int>(g_)) throw Error(ErrorCode::InvalidCurve, "deg h must be at most g");
  if (k.characteristic() == 2) {
    if (h_.is_zero()) throw Error(ErrorCode::InvalidCurve, "h = 0 in characteristic 2");
    // Singular points: h(x) = 0 and h'(x)^2 f(x) = f'(x)^2.
    Polynomial hd = h_.derivative(), fd = f_.derivative();
    if (!gcd(h_, hd * hd * f_ + fd * fd).is_one())
      throw Error(ErrorCode::InvalidCurve, "singular affine point");
  } else {
    Polynomial F = h_ * h_ + f_.scaled(k.from_int(4));
    if (!gcd(F, F.derivative()).is_one()) throw Error(ErrorCode::InvalidCurve, "h^2 + 4f not squarefree");
  }
}

HyperellipticCurve HyperellipticCurve::parse(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto c = line.find('#'); c != std::string::npos) line.resize(c);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "expected key=value: " + t);
    kv[trim(std::string_view(t).substr(0, eq))] = trim(std::string_view(t).substr(eq + 1));
  }
  for (const char* key : {"field", "genus", "f"})
    if (!kv.count(key)) throw Error(ErrorCode::ParseError, std::string("missing key ") + key);
  FieldSpec k = FieldSpec::parse(kv["field"]);
  unsigned g;
  try {
    g = static_cast<unsigned>(std::stoul(kv["genus"]));
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad genus");
  }
  Polynomial f = Polynomial::parse(k, kv["f"]);
  Polynomial h = kv.count("h") ? Polynomial::parse(k, kv["h"]) : Polynomial(k);
  return HyperellipticCurve(g, f, h);
}

HyperellipticCurve HyperellipticCurve::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string HyperellipticCurve::to_text() const {
  std::string s = "field=" + field().to_string() + "\ngenus=" + std::to_string(g_) + "\nf=" + f_.to_string() + "\n";
  if (!h_.is_zero()) s += "h=" + h_.to_string() + "\n";
  return s;
}

bool HyperellipticCurve::on_curve(u64 x, u64 y) const {
  const FieldSpec& k = field();
  return k.add(k.mul(y, y), k.mul(h_.eval(x), y)) == f_.eval(x);
}

Divisor identity(const HyperellipticCurve& C) { return {one(C.field()), zero(C.field())}; }

bool is_valid(const HyperellipticCurve& C, const Divisor& D) {
  if (!(D.u.field() == C.field()) || !D.u.is_monic()) return false;
  if (D.u.degree() > static_cast<int>(C.genus()) || D.v.degree() >= D.u.degree()) return false;
  if (!D.v.is_zero() && !(D.v.field() == C.field())) return false;
  return (congruence_lhs(C, D.v) % D.u).is_zero();
}

Divisor make_divisor(const HyperellipticCurve& C, Polynomial u, Polynomial v) {
  if (v.is_zero()) v = zero(C.field());
  Divisor D{std::move(u), std::move(v)};
  if (!is_valid(C, D)) throw Error(ErrorCode::InvalidDivisor, "not a reduced divisor");
  return D;
}

Divisor reduce(const HyperellipticCurve& C, Polynomial u, Polynomial v) {
  const int g = static_cast<int>(C.genus());
  v = v % u;
  while (u.degree() > g) {
    Polynomial nu = (C.f() - C.h() * v - v * v) / u;
    u = nu.monic();
    v = (-C.h() - v) % u;
  }
  return {u.monic(), v};
}

Divisor cantor_add(const HyperellipticCurve& C, const Divisor& a, const Divisor& b) {
  if (a.is_identity()) return b;
  if (b.is_identity()) return a;
  Xgcd e = xgcd(a.u, b.u);  // d1 = e.s a.u + e.t b.u
  Polynomial u, v;
  if (e.g.is_one()) {
    // Coprime: plain interpolation, the common case.
    u = a.u * b.u;
    v = (e.s * a.u * b.v + e.t * b.u * a.v) % u;
  } else {
    Xgcd c = xgcd(e.g, a.v + b.v + C.h());  // d = c.s d1 + c.t (v1 + v2 + h)
    const Polynomial& d = c.g;
    Polynomial s1 = c.s * e.s, s2 = c.s * e.t;
    u = (a.u * b.u) / (d * d);
    Polynomial num = s1 * a.u * b.v + s2 * b.u * a.v + c.t * (a.v * b.v + C.f());
    v = (num / d) % u;
  }
  return reduce(C, u, v);
}

Divisor negate(const HyperellipticCurve& C, const Divisor& D) {
  if (D.is_identity()) return D;
  return {D.u, (-D.v - C.h()) % D.u};
}

Divisor scalar_mul(const HyperellipticCurve& C, const Divisor& D, long long k) {
  Divisor base = k < 0 ? negate(C, D) : D;
  unsigned long long n = k < 0 ? 0ULL - static_cast<unsigned long long>(k) : static_cast<unsigned long long>(k);
  Divisor r = identity(C);
  while (n) {
    if (n & 1) r = cantor_add(C, r, base);
    n >>= 1;
    if (n) base = cantor_add(C, base, base);
  }
  return r;
}

Jacobian::Jacobian(HyperellipticCurve C) : C_(std::move(C)), width_(generic::byte_width(C_.q() - 1)) {}

std::string Jacobian::canonical_bytes(const Element& a) const {
  const int d = a.u.degree();
  std::string s(1, static_cast<char>(d));
  for (int i = 0; i < d; ++i) s += generic::le_bytes(a.u.coeff(i), width_);
  for (int i = 0; i < d; ++i) s += generic::le_bytes(a.v.coeff(i), width_);
  return s;
}

Divisor as_divisor(const PrimeDivisor& P) { return {P.u, P.v}; }

std::optional<DivisorFactorization> decompose(const HyperellipticCurve& C, const Divisor& D, unsigned bound,
                                              ff::Rng& rng) {
  DivisorFactorization out;
  if (D.u.degree() <= 0) return out;
  auto fac = poly::smooth_part(D.u, bound, rng);
  if (!fac) return std::nullopt;
  for (const auto& [p, e] : fac->factors) {
    Polynomial v = D.v % p;
    if (v.is_zero()) v = zero(C.field());
    out.parts.push_back({PrimeDivisor{p, v}, e});
  }
  return out;
}

Divisor recompose(const HyperellipticCurve& C, const DivisorFactorization& F) {
  Divisor r = identity(C);
  for (const auto& [p, e] : F.parts) r = cantor_add(C, r, scalar_mul(C, as_divisor(p), e));
  return r;
}

namespace {

// Arithmetic in K = F_q[X]/(P) with elements kept reduced.
struct Residues {
  Polynomial P;
  Polynomial mul(const Polynomial& a, const Polynomial& b) const { return (a * b) % P; }
  Polynomial pow(Polynomial a, unsigned __int128 e) const {
    Polynomial r = Polynomial::constant(P.field(), 1);
    while (e) {
      if (e & 1) r = mul(r, a);
      e >>= 1;
      if (e) a = mul(a, a);
    }
    return r;
  }
  unsigned __int128 size() const {
    unsigned __int128 s = 1;
    for (int i = 0; i < P.degree(); ++i) s *= P.field().order();
    return s;
  }
};

Polynomial random_residue(const Polynomial& P, ff::Rng& rng) {
  std::vector<u64> c(static_cast<std::size_t>(P.degree()));
  for (auto& x : c) x = P.field().random(rng);
  return Polynomial(P.field(), c);
}

// Square root in K (odd characteristic) by Tonelli-Shanks.
std::optional<Polynomial> sqrt_residue(const Residues& K, const Polynomial& a, ff::Rng& rng) {
  const FieldSpec& k = K.P.field();
  if (a.is_zero()) return a;
  const auto Q = K.size();
  const Polynomial minus_one = Polynomial::constant(k, k.neg(1));
  if (!K.pow(a, (Q - 1) / 2).is_one()) return std::nullopt;
  unsigned __int128 t = Q - 1;
  unsigned s = 0;
  while ((t & 1) == 0) {
    t >>= 1;
    ++s;
  }
  Polynomial z;
  do {
    z = random_residue(K.P, rng);
  } while (z.is_zero() || !(K.pow(z, (Q - 1) / 2) == minus_one));
  Polynomial c = K.pow(z, t), x = K.pow(a, (t + 1) / 2), b = K.pow(a, t);
  unsigned m = s;
  while (!b.is_one()) {
    unsigned i = 0;
    Polynomial b2 = b;
    while (!b2.is_one()) {
      b2 = K.mul(b2, b2);
      ++i;
    }
    Polynomial w = c;
    for (unsigned j = 0; j + 1 < m - i; ++j) w = K.mul(w, w);
    x = K.mul(x, w);
    c = K.mul(w, w);
    b = K.mul(b, c);
    m = i;
  }
  return x;
}

// Solves W^2 + W = c in K of characteristic 2 as an F_2-linear system.
std::optional<Polynomial> artin_schreier_residue(const Residues& K, const Polynomial& c) {
  const FieldSpec& k = K.P.field();
  const unsigned m = k.degree(), d = static_cast<unsigned>(K.P.degree()), n = m * d;
  auto to_bits = [&](const Polynomial& a) {
    std::vector<bool> bits(n);
    for (unsigned j = 0; j < d; ++j)
      for (unsigned i = 0; i < m; ++i) bits[j * m + i] = (a.coeff(j) >> i) & 1;
    return bits;
  };
  // Augmented rows of the n x n system: row r holds bit r of L(e_col) for every column.
  std::vector<std::vector<bool>> rows(n, std::vector<bool>(n + 1));
  for (unsigned col = 0; col < n; ++col) {
    Polynomial e = Polynomial::monomial(k, u64{1} << (col % m), col / m);
    auto img = to_bits(K.mul(e, e) + e);
    for (unsigned r = 0; r < n; ++r) rows[r][col] = img[r];
  }
  auto rhs = to_bits(c);
  for (unsigned r = 0; r < n; ++r) rows[r][n] = rhs[r];
  std::vector<int> pivot_col;
  unsigned rank = 0;
  for (unsigned col = 0; col < n && rank < n; ++col) {
    unsigned piv = rank;
    while (piv < n && !rows[piv][col]) ++piv;
    if (piv == n) continue;
    std::swap(rows[piv], rows[rank]);
    for (unsigned r = 0; r < n; ++r)
      if (r != rank && rows[r][col])
        for (unsigned j = col; j <= n; ++j) rows[r][j] = rows[r][j] ^ rows[rank][j];
    pivot_col.push_back(static_cast<int>(col));
    ++rank;
  }
  for (unsigned r = rank; r < n; ++r)
    if (rows[r][n]) return std::nullopt;
  std::vector<u64> coeffs(d, 0);
  for (unsigned r = 0; r < rank; ++r)
    if (rows[r][n]) {
      unsigned col = static_cast<unsigned>(pivot_col[r]);
      coeffs[col / m] |= u64{1} << (col % m);
    }
  return Polynomial(k, coeffs);
}

// Roots of Z^2 + hZ - f in F_q[X]/(P), P irreducible.
std::vector<Polynomial> local_roots(const HyperellipticCurve& C, const Polynomial& P, ff::Rng& rng) {
  const FieldSpec& k = C.field();
  Residues K{P};
  Polynomial hP = C.h() % P, fP = C.f() % P;
  std::vector<Polynomial> out;
  if (k.characteristic() == 2) {
    if (hP.is_zero()) {
      out.push_back(K.pow(fP, K.size() / 2));
      return out;
    }
    Polynomial c = K.mul(fP, invmod(K.mul(hP, hP), P));
    auto w = artin_schreier_residue(K, c);
    if (!w) return out;
    Polynomial z = K.mul(hP, *w);
    out.push_back(z);
    out.push_back(z + hP);
    return out;
  }
  Polynomial disc = (hP * hP + fP.scaled(k.from_int(4))) % P;
  const u64 half = k.inv(2);
  if (disc.is_zero()) {
    out.push_back((-hP).scaled(half));
    return out;
  }
  auto s = sqrt_residue(K, disc, rng);
  if (!s) return out;
  out.push_back((*s - hP).scaled(half));
  out.push_back((-*s - hP).scaled(half));
  return out;
}

}  // namespace

std::vector<Polynomial> mumford_v_candidates(const HyperellipticCurve& C, const Polynomial& u, ff::Rng& rng) {
  const FieldSpec& k = C.field();
  if (u.degree() <= 0) return {zero(k)};
  auto fac = poly::factor(u, rng);
  std::vector<Polynomial> result{zero(k)};
  for (const auto& f : fac.factors) {
    if (f.exponent != 1) throw Error(ErrorCode::DomainError, "u must be squarefree");
    auto r = local_roots(C, f.poly, rng);
    if (r.empty()) return {};
    Polynomial M = u / f.poly;
    Polynomial basis = (M * invmod(M % f.poly, f.poly)) % u;
    std::vector<Polynomial> next;
    for (const auto& acc : result)
      for (const auto& root : r) next.push_back((acc + root * basis) % u);
    result = std::move(next);
  }
  for (auto& v : result)
    if (v.is_zero()) v = zero(k);
  return result;
}

Divisor random_divisor_direct(const HyperellipticCurve& C, ff::Rng& rng) {
  const FieldSpec& k = C.field();
  const unsigned g = C.genus();
  for (;;) {
    std::vector<u64> c(g + 1);
    for (unsigned i = 0; i < g; ++i) c[i] = k.random(rng);
    c[g] = 1;
    Polynomial u(k, c);
    if (!gcd(u, u.derivative()).is_one()) continue;
    auto cands = mumford_v_candidates(C, u, rng);
    if (rng.below(u64{1} << g) >= cands.size()) continue;
    return {u, cands[rng.below(cands.size())]};
  }
}

Divisor random_divisor(const HyperellipticCurve& C, ff::Rng& rng) {
  Divisor d = random_divisor_direct(C, rng);
  for (int i = 0; i < 2; ++i) d = cantor_add(C, d, random_divisor_direct(C, rng));
  return d;
}

std::vector<Divisor> enumerate_divisors(const HyperellipticCurve& C, u64 cap) {
  const FieldSpec& k = C.field();
  const u64 q = k.order();
  const unsigned g = C.genus();
  u64 total = 0, block = 1;
  for (unsigned d = 0; d <= g; ++d) {
    total += block * block;
    if (total > cap) throw Error(ErrorCode::CapExceeded, "too many (u, v) pairs to enumerate");
    block *= q;
  }
  std::vector<Divisor> out;
  for (unsigned d = 0; d <= g; ++d) {
    std::vector<u64> uc(d + 1, 0), vc(d, 0);
    uc[d] = 1;
    for (;;) {
      Polynomial u(k, uc);
      std::fill(vc.begin(), vc.end(), 0);
      for (;;) {
        Polynomial v(k, vc);
        if ((congruence_lhs(C, v) % u).is_zero()) out.push_back({u, v});
        unsigned i = 0;
        while (i < d && ++vc[i] == q) vc[i++] = 0;
        if (i == d) break;
      }
      unsigned i = 0;
      while (i < d && ++uc[i] == q) uc[i++] = 0;
      if (i == d) break;
    }
  }
  return out;
}

}  // namespace dlkit::curve
