#include "dlkit/poly/factor.hpp"

#include <algorithm>

#include "dlkit/error.hpp"
#include "dlkit/ff/numtheory.hpp"

namespace dlkit::poly {

namespace {

// g with g(X)^p == f(X), assuming f' == 0.
Polynomial pth_root(const Polynomial& f) {
  const FieldSpec& F = f.field();
  const u64 p = F.characteristic();
  std::vector<u64> out(f.degree() / p + 1, 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    u64 c = f.coeff(i * p);
    out[i] = F.is_binary() ? F.sqrt_char2(c) : c;
  }
  return Polynomial(F, std::move(out));
}

Polynomial random_poly(const FieldSpec& F, int below_degree, ff::Rng& rng) {
  std::vector<u64> c(below_degree);
  for (auto& x : c) x = F.random(rng);
  return Polynomial(F, std::move(c));
}

// X^q mod f.
Polynomial frobenius_x(const Polynomial& f) {
  const FieldSpec& F = f.field();
  return powmod(Polynomial::x(F), F.order(), f);
}

Polynomial powq(const Polynomial& a, const Polynomial& f) { return powmod(a, a.field().order(), f); }

void sort_factors(std::vector<Factor>& fs) {
  std::sort(fs.begin(), fs.end(), [](const Factor& a, const Factor& b) { return a.poly < b.poly; });
  // merge duplicates (possible after squarefree recombination)
  std::vector<Factor> out;
  for (auto& f : fs) {
    if (!out.empty() && out.back().poly == f.poly) {
      out.back().exponent += f.exponent;
    } else {
      out.push_back(std::move(f));
    }
  }
  fs = std::move(out);
}

}  // namespace

Polynomial Factorization::expand() const {
  Polynomial r = Polynomial::constant(field, unit);
  for (const auto& f : factors) {
    for (unsigned i = 0; i < f.exponent; ++i) r = r * f.poly;
  }
  return r;
}

int Factorization::max_degree() const {
  int d = 0;
  for (const auto& f : factors) d = std::max(d, f.poly.degree());
  return d;
}

std::vector<Factor> squarefree_decomposition(const Polynomial& f_in) {
  if (f_in.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "squarefree decomposition of zero");
  std::vector<Factor> out;
  Polynomial f = f_in.monic();
  if (f.degree() <= 0) return out;
  const u64 p = f.field().characteristic();

  Polynomial c = gcd(f, f.derivative());
  Polynomial w = f / c;
  unsigned i = 1;
  while (!w.is_one()) {
    Polynomial y = gcd(w, c);
    Polynomial z = w / y;
    if (z.degree() > 0) out.push_back({z, i});
    ++i;
    w = y;
    c = c / y;
  }
  if (!c.is_one()) {
    for (auto& part : squarefree_decomposition(pth_root(c))) {
      out.push_back({part.poly, static_cast<unsigned>(part.exponent * p)});
    }
  }
  std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) { return a.exponent < b.exponent; });
  return out;
}

DistinctDegree distinct_degree(const Polynomial& f_in, unsigned max_degree) {
  DistinctDegree r;
  const FieldSpec& F = f_in.field();
  Polynomial f = f_in.monic();
  Polynomial x = Polynomial::x(F);
  Polynomial h = x % f;
  for (unsigned d = 1; f.degree() >= 2 * static_cast<int>(d) && d <= max_degree; ++d) {
    h = powq(h, f);
    Polynomial g = gcd(h - x, f);
    if (g.degree() > 0) {
      r.parts.emplace_back(g, d);
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) {
    if (static_cast<unsigned>(f.degree()) <= max_degree) {
      r.parts.emplace_back(f, static_cast<unsigned>(f.degree()));
    } else {
      r.rest = f;
    }
  }
  if (r.rest.is_zero()) r.rest = Polynomial::constant(F, 1);
  return r;
}

std::vector<Polynomial> equal_degree(const Polynomial& f_in, unsigned d, ff::Rng& rng) {
  Polynomial f = f_in.monic();
  const FieldSpec& F = f.field();
  if (f.degree() <= static_cast<int>(d)) return {f};
  const Polynomial one = Polynomial::constant(F, 1);

  Polynomial g;
  for (;;) {
    Polynomial a = random_poly(F, f.degree(), rng);
    if (a.degree() <= 0) continue;
    Polynomial t;
    if (F.is_binary()) {
      // trace from F_{q^d} down to F_2: a + a^2 + ... + a^(2^(md-1))
      t = a;
      Polynomial s = a;
      const unsigned steps = F.degree() * d;
      for (unsigned i = 1; i < steps; ++i) {
        s = mulmod(s, s, f);
        t += s;
      }
    } else {
      Polynomial g0 = gcd(a, f);
      if (g0.degree() > 0) {
        g = g0;
        break;
      }
      // a^((q^d - 1)/2) = (a * a^q * ... * a^(q^(d-1)))^((q-1)/2)
      Polynomial norm = a, conj = a;
      for (unsigned i = 1; i < d; ++i) {
        conj = powq(conj, f);
        norm = mulmod(norm, conj, f);
      }
      t = powmod(norm, (F.order() - 1) / 2, f) - one;
    }
    g = gcd(t, f);
    if (g.degree() > 0 && g.degree() < f.degree()) break;
  }
  auto left = equal_degree(g, d, rng);
  auto right = equal_degree(f / g, d, rng);
  left.insert(left.end(), right.begin(), right.end());
  std::sort(left.begin(), left.end());
  return left;
}

Factorization factor(const Polynomial& f, ff::Rng& rng) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "cannot factor zero");
  Factorization out{f.field(), f.lead(), {}};
  for (const auto& sq : squarefree_decomposition(f)) {
    auto dd = distinct_degree(sq.poly, static_cast<unsigned>(sq.poly.degree()));
    for (const auto& [part, d] : dd.parts) {
      for (auto& irr : equal_degree(part, d, rng)) out.factors.push_back({std::move(irr), sq.exponent});
    }
  }
  sort_factors(out.factors);
  return out;
}

bool is_irreducible(const Polynomial& f_in) {
  if (f_in.degree() <= 0) return false;
  Polynomial f = f_in.monic();
  const unsigned n = static_cast<unsigned>(f.degree());
  if (n == 1) return true;
  const FieldSpec& F = f.field();
  Polynomial x = Polynomial::x(F);
  auto primes = ff::factorize(n);
  // powers[k] = X^(q^k) mod f
  std::vector<Polynomial> powers{x % f};
  for (unsigned k = 1; k <= n; ++k) powers.push_back(powq(powers.back(), f));
  if (!(powers[n] == x % f)) return false;
  for (auto [r, e] : primes) {
    (void)e;
    if (gcd(powers[n / r] - x, f).degree() > 0) return false;
  }
  return true;
}

std::vector<Polynomial> enumerate_irreducibles(const FieldSpec& field, unsigned max_degree, u64 cap) {
  const u64 q = field.order();
  u64 total = 0;
  {
    u64 qd = 1;
    for (unsigned d = 1; d <= max_degree; ++d) {
      if (qd > cap / q) throw Error(ErrorCode::BoundTooLarge, "too many candidate polynomials");
      qd *= q;
      total += qd;
      if (total > cap) throw Error(ErrorCode::BoundTooLarge, "too many candidate polynomials");
    }
  }
  std::vector<Polynomial> out;
  for (unsigned d = 1; d <= max_degree; ++d) {
    std::vector<u64> c(d + 1, 0);
    c[d] = 1;
    for (;;) {
      Polynomial p(field, c);
      if (is_irreducible(p)) out.push_back(std::move(p));
      // odometer over the low coefficients, constant term fastest
      std::size_t i = 0;
      while (i < d && ++c[i] == q) c[i++] = 0;
      if (i == d) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Factorization> smooth_part(const Polynomial& f, unsigned bound, ff::Rng& rng) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "smoothness of zero");
  Factorization out{f.field(), f.lead(), {}};
  for (const auto& sq : squarefree_decomposition(f)) {
    auto dd = distinct_degree(sq.poly, bound);
    if (!dd.rest.is_one()) return std::nullopt;
    for (const auto& [part, d] : dd.parts) {
      for (auto& irr : equal_degree(part, d, rng)) out.factors.push_back({std::move(irr), sq.exponent});
    }
  }
  sort_factors(out.factors);
  return out;
}

bool is_smooth(const Polynomial& f, unsigned bound) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "smoothness of zero");
  for (const auto& sq : squarefree_decomposition(f)) {
    if (!distinct_degree(sq.poly, bound).rest.is_one()) return false;
  }
  return true;
}

std::vector<u64> roots(const Polynomial& f, ff::Rng& rng) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "roots of zero");
  if (f.degree() <= 0) return {};
  Polynomial m = f.monic();
  Polynomial x = Polynomial::x(f.field());
  Polynomial lin = gcd(frobenius_x(m) - x, m);
  std::vector<u64> out;
  if (lin.degree() <= 0) return out;
  for (const auto& l : equal_degree(lin, 1, rng)) out.push_back(f.field().neg(l.coeff(0)));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dlkit::poly
