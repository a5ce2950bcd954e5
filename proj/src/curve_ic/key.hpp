#pragma once

#include <string>

#include "dlkit/poly/polynomial.hpp"

namespace dlkit::curve_ic {

inline std::string prime_key(const poly::Polynomial& u, const poly::Polynomial& v) {
  std::string key;
  auto put = [&](u64 c) { key.append(reinterpret_cast<const char*>(&c), sizeof c); };
  put(static_cast<u64>(u.degree()));
  for (int i = 0; i < u.degree(); ++i) put(u.coeff(i));
  for (int i = 0; i < u.degree(); ++i) put(v.coeff(i));
  return key;
}

}  // namespace dlkit::curve_ic
