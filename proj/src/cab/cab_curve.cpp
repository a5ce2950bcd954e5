#include <fstream>
#include <map>
#include <numeric>
#include <regex>
#include <sstream>

#include "dlkit/cab/cab.hpp"
#include "dlkit/error.hpp"

namespace dlkit::cab {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

using YPoly = std::vector<Polynomial>;  // coefficients of Y^j

// Euclid in K[Y], K = F_q[X]/(P); coefficients kept reduced mod P.
YPoly reduce_y(YPoly f, const Polynomial& P) {
  for (auto& c : f) c = c % P;
  while (!f.empty() && f.back().is_zero()) f.pop_back();
  return f;
}

YPoly gcd_y(YPoly a, YPoly b, const Polynomial& P) {
  a = reduce_y(std::move(a), P);
  b = reduce_y(std::move(b), P);
  while (!b.empty()) {
    const Polynomial inv = invmod(b.back(), P);
    while (a.size() >= b.size()) {
      const Polynomial q = (a.back() * inv) % P;
      const std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = (a[shift + i] - q * b[i]) % P;
      a = reduce_y(std::move(a), P);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a;
}

}  // namespace

Polynomial resultant_y(const std::vector<Polynomial>& A_in, const std::vector<Polynomial>& B_in) {
  auto strip = [](std::vector<Polynomial> v) {
    while (!v.empty() && v.back().is_zero()) v.pop_back();
    return v;
  };
  const auto A = strip(A_in), B = strip(B_in);
  if (A.empty() || B.empty()) throw Error(ErrorCode::ZeroPolynomial, "resultant of a zero polynomial");
  const FieldSpec& k = A[0].field();
  const std::size_t m = A.size() - 1, n = B.size() - 1;
  const std::size_t N = m + n;
  if (N == 0) return Polynomial::constant(k, 1);
  std::vector<std::vector<Polynomial>> M(N, std::vector<Polynomial>(N, Polynomial(k)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= m; ++j) M[i][i + j] = A[m - j];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= n; ++j) M[n + i][i + j] = B[n - j];
  Polynomial prev = Polynomial::constant(k, 1);
  bool negate = false;
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t piv = c;
    while (piv < N && M[piv][c].is_zero()) ++piv;
    if (piv == N) return Polynomial(k);
    if (piv != c) {
      std::swap(M[piv], M[c]);
      negate = !negate;
    }
    for (std::size_t i = c + 1; i < N; ++i) {
      for (std::size_t j = c + 1; j < N; ++j) M[i][j] = (M[i][j] * M[c][c] - M[i][c] * M[c][j]) / prev;
      M[i][c] = Polynomial(k);
    }
    prev = M[c][c];
  }
  Polynomial det = M[N - 1][N - 1];
  return negate ? -det : det;
}

CabCurve::CabCurve(FieldSpec field, unsigned a, unsigned b, std::vector<Term> terms)
    : field_(field), a_(a), b_(b), terms_(std::move(terms)) {
  if (a < 2 || b < 2 || std::gcd(a, b) != 1) throw Error(ErrorCode::InvalidCurve, "a and b must be coprime and >= 2");
  const u64 p = field_.characteristic();
  if (a % p == 0 || b % p == 0) throw Error(ErrorCode::InvalidCurve, "characteristic divides a or b");
  // Merge duplicate monomials and check the weight condition.
  std::map<std::pair<unsigned, unsigned>, u64> merged;
  for (const auto& t : terms_) {
    if (a * t.i + b * t.j >= a * b) throw Error(ErrorCode::InvalidCurve, "term violates a i + b j < a b");
    auto& c = merged[{t.j, t.i}];
    c = field_.add(c, t.c % field_.order());
  }
  terms_.clear();
  for (const auto& [ji, c] : merged)
    if (c) terms_.push_back({ji.second, ji.first, c});

  std::vector<std::vector<u64>> raw(a + 1);
  auto put = [&](unsigned j, unsigned i, u64 c) {
    if (raw[j].size() <= i) raw[j].resize(i + 1, 0);
    raw[j][i] = field_.add(raw[j][i], c);
  };
  put(a, 0, 1);
  put(0, b, field_.neg(1));
  for (const auto& t : terms_) put(t.j, t.i, field_.neg(t.c));
  for (unsigned j = 0; j <= a; ++j) coeffs_.emplace_back(field_, raw[j]);
  for (unsigned j = 0; j <= a; ++j) dx_.push_back(coeffs_[j].derivative());
  for (unsigned j = 1; j <= a; ++j) dy_.push_back(coeffs_[j].scaled(field_.from_int(j)));

  // Singular points lie over common roots of Res_Y(C, C_X) and Res_Y(C, C_Y);
  // each candidate fibre is checked by a gcd in K[Y].
  Polynomial r_y = resultant_y(coeffs_, dy_);
  if (r_y.is_zero()) throw Error(ErrorCode::InvalidCurve, "C and C_Y share a factor");
  bool dx_zero = true;
  for (const auto& c : dx_) dx_zero = dx_zero && c.is_zero();
  Polynomial g = dx_zero ? r_y : gcd(r_y, resultant_y(coeffs_, dx_));
  if (g.degree() > 0) {
    ff::Rng rng(1);
    for (const auto& f : poly::factor(g, rng).factors) {
      YPoly h = gcd_y(gcd_y(coeffs_, dy_, f.poly), dx_, f.poly);
      if (h.size() >= 2) throw Error(ErrorCode::InvalidCurve, "singular affine point");
    }
  }
}

u64 CabCurve::eval(u64 x, u64 y) const {
  u64 acc = 0;
  for (unsigned j = a_ + 1; j-- > 0;) acc = field_.add(field_.mul(acc, y), coeffs_[j].eval(x));
  return acc;
}

Polynomial CabCurve::fiber(u64 x) const {
  std::vector<u64> c(a_ + 1);
  for (unsigned j = 0; j <= a_; ++j) c[j] = coeffs_[j].eval(x);
  return Polynomial(field_, c);
}

CabCurve CabCurve::parse(std::string_view text) {
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
  for (const char* key : {"field", "a", "b"})
    if (!kv.count(key)) throw Error(ErrorCode::ParseError, std::string("missing key ") + key);
  FieldSpec k = FieldSpec::parse(kv["field"]);
  std::vector<Term> terms;
  try {
    static const std::regex triple(R"(\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\))");
    const std::string& spec = kv["cab"];
    std::string rest = std::regex_replace(spec, triple, "");
    for (char ch : rest)
      if (!std::isspace(static_cast<unsigned char>(ch)) && ch != ',' && ch != ';')
        throw Error(ErrorCode::ParseError, "bad cab term list: " + spec);
    for (std::sregex_iterator it(spec.begin(), spec.end(), triple), end; it != end; ++it)
      terms.push_back({static_cast<unsigned>(std::stoul((*it)[1])), static_cast<unsigned>(std::stoul((*it)[2])),
                       std::stoull((*it)[3])});
    return CabCurve(k, static_cast<unsigned>(std::stoul(kv["a"])), static_cast<unsigned>(std::stoul(kv["b"])),
                    terms);
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::ParseError, "bad number in curve file");
  } catch (const std::out_of_range&) {
    throw Error(ErrorCode::ParseError, "number out of range in curve file");
  }
}

CabCurve CabCurve::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string CabCurve::to_text() const {
  std::string s = "field=" + field_.to_string() + "\na=" + std::to_string(a_) + "\nb=" + std::to_string(b_) + "\ncab=";
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    if (t) s += ",";
    s += "(" + std::to_string(terms_[t].i) + "," + std::to_string(terms_[t].j) + "," + std::to_string(terms_[t].c) + ")";
  }
  return s + "\n";
}

CabCurve CabCurve::from_hyperelliptic(const curve::HyperellipticCurve& H) {
  const FieldSpec& k = H.field();
  std::vector<Term> terms;
  const unsigned b = 2 * H.genus() + 1;
  for (unsigned i = 0; i < b; ++i)
    if (H.f().coeff(i)) terms.push_back({i, 0, H.f().coeff(i)});
  for (int i = 0; i <= H.h().degree(); ++i)
    if (H.h().coeff(i)) terms.push_back({static_cast<unsigned>(i), 1, k.neg(H.h().coeff(i))});
  return CabCurve(k, 2, b, terms);
}

curve::HyperellipticCurve CabCurve::to_hyperelliptic() const {
  if (a_ != 2) throw Error(ErrorCode::DomainError, "hyperelliptic model needs a = 2");
  // Y^2 - C_1 ... : y^2 + h y = f with h = C_1 and f = -C_0.
  return curve::HyperellipticCurve(genus(), -coeffs_[0], coeffs_[1]);
}

}  // namespace dlkit::cab
