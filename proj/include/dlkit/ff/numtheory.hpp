#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace dlkit::ff {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }
u64 powmod(u64 base, u64 exp, u64 m);
std::optional<u64> invmod(u64 a, u64 m);

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(u64 n);

// Prime factorization by trial division and Brent's rho; sorted by prime.
std::vector<std::pair<u64, unsigned>> factorize(u64 n);

u64 isqrt(u64 n);
u64 isqrt_ceil(u64 n);

// Smallest x >= 0 with a*x == b (mod m) for each solution class; empty if none.
std::vector<u64> solve_linear_congruence(u64 a, u64 b, u64 m, u64 max_solutions);

}  // namespace dlkit::ff
