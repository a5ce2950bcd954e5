#pragma once

#include <cstdint>

namespace dlkit::curve_ic {

// Arithmetic mod ell, or mod 2^64 when ell == 0.
inline std::uint64_t add_mod64(std::uint64_t a, std::uint64_t b, std::uint64_t ell) {
  if (ell == 0) return a + b;
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) + b) % ell);
}

inline std::uint64_t mul_mod64(std::uint64_t a, std::uint64_t b, std::uint64_t ell) {
  if (ell == 0) return a * b;
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % ell);
}

inline std::uint64_t scale_mod64(std::uint64_t a, std::int64_t c, std::uint64_t ell) {
  if (ell == 0) return a * static_cast<std::uint64_t>(c);
  const std::uint64_t m = c < 0 ? (ell - static_cast<std::uint64_t>(-(c + 1)) % ell - 1) % ell
                                : static_cast<std::uint64_t>(c) % ell;
  return mul_mod64(a, m, ell);
}

}  // namespace dlkit::curve_ic
