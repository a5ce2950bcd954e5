#include "dlkit/curve/zeta.hpp"

#include <array>
#include <cmath>
#include <unordered_map>

#include "dlkit/error.hpp"
#include "dlkit/ff/numtheory.hpp"

namespace dlkit::curve {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 ipow(u64 q, unsigned k) {
  u128 r = 1;
  for (unsigned i = 0; i < k; ++i) {
    r *= q;
    if (r > (u128{1} << 100)) return r;
  }
  return r;
}

// F_{q^k} = F_q[t]/(modulus) for odd prime q, coefficient vectors of length k.
class SmallExtension {
 public:
  static constexpr unsigned kMax = 12;
  using Elem = std::array<u64, kMax>;

  SmallExtension(u64 q, unsigned k, ff::Rng& rng) : q_(q), k_(k) {
    if (k > kMax) throw Error(ErrorCode::CapExceeded, "extension degree too large");
    red_.fill(0);
    if (k == 1) return;
    FieldSpec base = FieldSpec::prime(q);
    for (;;) {
      std::vector<u64> c(k + 1);
      for (unsigned i = 0; i < k; ++i) c[i] = rng.below(q);
      c[k] = 1;
      Polynomial m(base, c);
      if (!poly::is_irreducible(m)) continue;
      // t^k = -(c_0 + ... + c_{k-1} t^{k-1})
      for (unsigned i = 0; i < k; ++i) red_[i] = (q - c[i]) % q;
      return;
    }
  }

  unsigned degree() const { return k_; }

  Elem mul(const Elem& a, const Elem& b) const {
    std::array<u64, 2 * kMax> t{};
    for (unsigned i = 0; i < k_; ++i) {
      if (a[i] == 0) continue;
      for (unsigned j = 0; j < k_; ++j) t[i + j] = (t[i + j] + a[i] * b[j]) % q_;
    }
    for (unsigned i = 2 * k_ - 2; i >= k_; --i) {
      const u64 c = t[i];
      if (c)
        for (unsigned j = 0; j < k_; ++j) t[i - k_ + j] = (t[i - k_ + j] + c * red_[j]) % q_;
    }
    Elem r{};
    for (unsigned i = 0; i < k_; ++i) r[i] = t[i];
    return r;
  }

  u64 index(const Elem& a) const {
    u64 idx = 0;
    for (unsigned i = k_; i-- > 0;) idx = idx * q_ + a[i];
    return idx;
  }

  // Advances the odometer; false after wrapping to zero.
  bool next(Elem& a) const {
    for (unsigned i = 0; i < k_; ++i) {
      if (++a[i] < q_) return true;
      a[i] = 0;
    }
    return false;
  }

 private:
  u64 q_;
  unsigned k_;
  Elem red_;
};

u64 count_odd(const HyperellipticCurve& C, unsigned k) {
  const FieldSpec& base = C.field();
  const u64 q = base.order();
  ff::Rng rng(0x5eed + k);
  SmallExtension E(q, k, rng);
  const u64 Q = static_cast<u64>(ipow(q, k));
  std::vector<std::uint64_t> square((Q + 63) / 64, 0);
  SmallExtension::Elem y{};
  do {
    u64 i = E.index(E.mul(y, y));
    square[i >> 6] |= u64{1} << (i & 63);
  } while (E.next(y));

  Polynomial F = C.h() * C.h() + C.f().scaled(base.from_int(4));
  const int n = F.degree();
  u64 count = 1;  // point at infinity
  SmallExtension::Elem x{};
  do {
    SmallExtension::Elem acc{};
    acc[0] = F.coeff(n);
    for (int i = n - 1; i >= 0; --i) {
      acc = E.mul(acc, x);
      acc[0] = (acc[0] + F.coeff(i)) % q;
    }
    u64 idx = E.index(acc);
    if (idx == 0)
      count += 1;
    else if ((square[idx >> 6] >> (idx & 63)) & 1)
      count += 2;
  } while (E.next(x));
  return count;
}

u64 count_char2(const HyperellipticCurve& C, unsigned k) {
  const FieldSpec& base = C.field();
  const unsigned m = base.degree();
  if (m * k > 62) throw Error(ErrorCode::CapExceeded, "extension too large");
  FieldSpec ext = FieldSpec::binary(m * k);
  // Embed the base field through a root of its defining polynomial.
  std::vector<u64> powers(m, 1);
  if (m > 1) {
    const u64 mod = base.modulus();
    std::vector<u64> bits(m + 1);
    for (unsigned i = 0; i <= m; ++i) bits[i] = (mod >> i) & 1;
    ff::Rng rng(7);
    auto rs = poly::roots(Polynomial(ext, bits), rng);
    if (rs.empty()) throw Error(ErrorCode::VerificationFailed, "no embedding of the base field");
    for (unsigned i = 1; i < m; ++i) powers[i] = ext.mul(powers[i - 1], rs.front());
  }
  auto embed = [&](u64 a) {
    u64 r = 0;
    for (unsigned i = 0; i < m; ++i)
      if ((a >> i) & 1) r ^= powers[i];
    return r;
  };
  std::vector<u64> fc, hc;
  for (int i = 0; i <= C.f().degree(); ++i) fc.push_back(embed(C.f().coeff(i)));
  for (int i = 0; i <= C.h().degree(); ++i) hc.push_back(embed(C.h().coeff(i)));
  auto horner = [&](const std::vector<u64>& c, u64 x) {
    u64 acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) acc = ext.mul(acc, x) ^ c[i];
    return acc;
  };
  const u64 Q = ext.order();
  u64 count = 1;
  for (u64 x = 0; x < Q; ++x) {
    u64 hx = horner(hc, x), fx = horner(fc, x);
    if (hx == 0)
      count += 1;
    else if (ext.trace(ext.mul(fx, ext.inv(ext.mul(hx, hx)))) == 0)
      count += 2;
  }
  return count;
}

std::vector<i128> newton_coefficients(u64 q, unsigned g, const std::vector<u64>& counts) {
  const unsigned k = static_cast<unsigned>(counts.size());
  std::vector<i128> S(k + 1, 0), a(k + 1, 0);
  a[0] = 1;
  for (unsigned i = 1; i <= k; ++i) S[i] = static_cast<i128>(ipow(q, i)) + 1 - static_cast<i128>(counts[i - 1]);
  for (unsigned j = 1; j <= k && j <= g; ++j) {
    i128 s = 0;
    for (unsigned i = 1; i <= j; ++i) s += S[i] * a[j - i];
    if (s % j != 0) throw Error(ErrorCode::VerificationFailed, "point counts inconsistent with a zeta function");
    a[j] = -s / static_cast<i128>(j);
  }
  return a;
}

long double binom(unsigned n, unsigned k) {
  long double r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

u64 count_points(const HyperellipticCurve& C, unsigned k, u64 cap) {
  if (k == 0) throw Error(ErrorCode::DomainError, "extension degree must be positive");
  if (ipow(C.q(), k) > cap) throw Error(ErrorCode::CapExceeded, "extension field too large to enumerate");
  return C.field().characteristic() == 2 ? count_char2(C, k) : count_odd(C, k);
}

std::vector<i128> l_polynomial(const HyperellipticCurve& C, const std::vector<u64>& counts) {
  const unsigned g = C.genus();
  if (counts.size() != g) throw Error(ErrorCode::DomainError, "need N_1..N_g");
  auto a = newton_coefficients(C.q(), g, counts);
  a.resize(2 * g + 1);
  for (unsigned j = 0; j < g; ++j) a[2 * g - j] = static_cast<i128>(ipow(C.q(), g - j)) * a[j];
  return a;
}

WeilInterval weil_interval(u64 q, unsigned g) {
  const u64 s = ff::isqrt(q);
  if (s * s == q) {
    auto lo = ipow(s - 1, 2 * g), hi = ipow(s + 1, 2 * g);
    return {static_cast<u64>(lo), static_cast<u64>(hi)};
  }
  const long double r = std::sqrt(static_cast<long double>(q));
  return {static_cast<u64>(std::ceil(std::pow(r - 1, 2.0L * g))),
          static_cast<u64>(std::floor(std::pow(r + 1, 2.0L * g)))};
}

namespace {

// All n in [lo, hi] with n D = 0, by baby-step giant-step; empty optional when
// D has order below the baby-step range (useless for filtering).
std::optional<std::vector<u64>> multiples_in_interval(const Jacobian& J, const Divisor& D, u64 lo, u64 hi) {
  const HyperellipticCurve& C = J.curve();
  const u64 width = hi - lo;
  const u64 m = ff::isqrt_ceil(width + 1);
  if (m > (u64{1} << 24)) throw Error(ErrorCode::CapExceeded, "order interval too wide for baby-step giant-step");
  std::unordered_map<std::string, u64> baby;
  baby.reserve(m * 2);
  Divisor cur = J.identity();
  for (u64 j = 0; j < m; ++j) {
    if (!baby.emplace(J.canonical_bytes(cur), j).second) return std::nullopt;
    cur = J.op(cur, D);
  }
  const Divisor step = cur;  // m D
  Divisor T = scalar_mul(C, D, static_cast<long long>(lo));
  std::vector<u64> out;
  for (u64 i = 0; lo + i * m <= hi; ++i) {
    auto it = baby.find(J.canonical_bytes(J.inverse(T)));
    if (it != baby.end()) {
      u64 n = lo + i * m + it->second;
      if (n <= hi) out.push_back(n);
    }
    T = J.op(T, step);
  }
  return out;
}

}  // namespace

JacobianOrderReport jacobian_order_report(const HyperellipticCurve& C, const JacobianOrderOptions& opt) {
  const u64 q = C.q();
  const unsigned g = C.genus();
  if (ipow(q, g) > opt.cap) throw Error(ErrorCode::CapExceeded, "q^g above the configured cap");
  JacobianOrderReport rep{};
  unsigned k = 0;
  while (k < g && ipow(q, k + 1) <= opt.count_cap) ++k;
  for (unsigned i = 1; i <= k; ++i) rep.counts.push_back(count_points(C, i, opt.count_cap));
  const WeilInterval weil = weil_interval(q, g);
  if (k == g) {
    auto a = l_polynomial(C, rep.counts);
    i128 n = 0;
    for (auto x : a) n += x;
    if (n < static_cast<i128>(weil.lo) || n > static_cast<i128>(weil.hi))
      throw Error(ErrorCode::VerificationFailed, "L(1) outside the Weil interval");
    rep.order = static_cast<u64>(n);
    rep.from_zeta_only = true;
    rep.candidates_lo = rep.candidates_hi = rep.order;
    return rep;
  }
  // L(1) = sum_{j<g} a_j (1 + q^{g-j}) + a_g with |a_j| <= C(2g, j) q^{j/2}.
  auto a = newton_coefficients(q, g, rep.counts);
  long double center = 0, slack = 0;
  for (unsigned j = 0; j <= g; ++j) {
    long double mult = j < g ? 1.0L + static_cast<long double>(ipow(q, g - j)) : 1.0L;
    if (j <= k)
      center += static_cast<long double>(a[j]) * mult;
    else
      slack += std::floor(binom(2 * g, j) * std::pow(static_cast<long double>(q), j / 2.0L)) * mult;
  }
  u64 lo = weil.lo, hi = weil.hi;
  if (center - slack > lo) lo = static_cast<u64>(std::floor(center - slack));
  if (center + slack < hi) hi = static_cast<u64>(std::ceil(center + slack));
  rep.candidates_lo = lo;
  rep.candidates_hi = hi;

  Jacobian J(C);
  ff::Rng rng(opt.seed);
  std::optional<std::vector<u64>> cands;
  unsigned used = 0;
  for (unsigned tries = 0; !cands && tries < 4 * opt.check_divisors; ++tries)
    cands = multiples_in_interval(J, random_divisor(C, rng), lo, hi);
  if (!cands) throw Error(ErrorCode::AmbiguousOrder, "random divisors of tiny order only");
  for (; used < opt.check_divisors && cands->size() > 1; ++used) {
    Divisor D = random_divisor(C, rng);
    std::vector<u64> keep;
    for (u64 n : *cands)
      if (scalar_mul(C, D, static_cast<long long>(n)).is_identity()) keep.push_back(n);
    *cands = std::move(keep);
  }
  if (cands->empty()) throw Error(ErrorCode::VerificationFailed, "no order candidate survived");
  if (cands->size() > 1) throw Error(ErrorCode::AmbiguousOrder, std::to_string(cands->size()) + " candidates remain");
  // One more random check guards against a lucky single match.
  for (unsigned i = 0; i < 2; ++i)
    if (!scalar_mul(C, random_divisor(C, rng), static_cast<long long>(cands->front())).is_identity())
      throw Error(ErrorCode::VerificationFailed, "order candidate fails on a random divisor");
  rep.order = cands->front();
  rep.from_zeta_only = false;
  return rep;
}

u64 jacobian_order(const HyperellipticCurve& C, const JacobianOrderOptions& opt) {
  return jacobian_order_report(C, opt).order;
}

}  // namespace dlkit::curve
