#include "dlkit/ff/numtheory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

namespace dlkit::ff {

u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::optional<u64> invmod(u64 a, u64 m) {
  if (m == 0) return std::nullopt;
  __int128 old_r = static_cast<__int128>(a % m), r = m;
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    std::tie(old_r, r) = std::pair<__int128, __int128>{r, old_r - q * r};
    std::tie(old_s, s) = std::pair<__int128, __int128>{s, old_s - q * s};
  }
  if (old_r != 1) return m == 1 ? std::optional<u64>{0} : std::nullopt;
  old_s %= static_cast<__int128>(m);
  if (old_s < 0) old_s += m;
  return static_cast<u64>(old_s);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 325, 9375, 28178, 450775, 9780504, 1795265022}) {
    a %= n;
    if (a == 0) continue;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

u64 rho_brent(u64 n, u64 c) {
  if (n % 2 == 0) return 2;
  auto f = [&](u64 x) { return (mulmod(x, x, n) + c) % n; };
  u64 y = 2, g = 1, q = 1, x = 0, ys = 0;
  const u64 m = 128;
  for (u64 r = 1; g == 1; r <<= 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    for (u64 k = 0; k < r && g == 1; k += m) {
      ys = y;
      for (u64 i = 0; i < std::min(m, r - k); ++i) {
        y = f(y);
        q = mulmod(q, x > y ? x - y : y - x, n);
      }
      g = std::gcd(q, n);
    }
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

void factor_into(u64 n, std::map<u64, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  for (u64 c = 1;; ++c) {
    u64 d = rho_brent(n, c);
    if (d != n && d != 1) {
      factor_into(d, out);
      factor_into(n / d, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
  std::map<u64, unsigned> out;
  if (n <= 1) return {};
  for (u64 p = 2; p < 1000 && p * p <= n; ++p) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  factor_into(n, out);
  return {out.begin(), out.end()};
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

u64 isqrt_ceil(u64 n) {
  u64 r = isqrt(n);
  return r * r == n ? r : r + 1;
}

std::vector<u64> solve_linear_congruence(u64 a, u64 b, u64 m, u64 max_solutions) {
  a %= m;
  b %= m;
  u64 g = std::gcd(a, m);
  if (g == 0) g = m;
  if (b % g != 0) return {};
  u64 m2 = m / g;
  u64 x0 = 0;
  if (m2 > 1) x0 = mulmod(b / g, *invmod(a / g, m2), m2);
  std::vector<u64> sols;
  for (u64 k = 0; k < g && k < max_solutions; ++k) sols.push_back(x0 + k * m2);
  return sols;
}

}  // namespace dlkit::ff
