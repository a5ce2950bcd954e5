#pragma once

#include <concepts>
#include <cstdint>
#include <string>

#include "dlkit/ff/field.hpp"
#include "dlkit/ff/numtheory.hpp"

namespace dlkit::generic {

using u64 = std::uint64_t;

// What the generic solvers need from a group: a canonical byte string per
// element (used for hashing, walk partitions and distinguished points).
template <typename G>
concept Group = requires(const G& g, const typename G::Element& a, const typename G::Element& b) {
  typename G::Element;
  { g.identity() } -> std::convertible_to<typename G::Element>;
  { g.op(a, b) } -> std::convertible_to<typename G::Element>;
  { g.inverse(a) } -> std::convertible_to<typename G::Element>;
  { g.canonical_bytes(a) } -> std::convertible_to<std::string>;
  { a == b } -> std::convertible_to<bool>;
};

inline std::string le_bytes(u64 v, unsigned width) {
  std::string s(width, '\0');
  for (unsigned i = 0; i < width; ++i) s[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  return s;
}

inline unsigned byte_width(u64 max_value) {
  unsigned w = 1;
  while (w < 8 && (max_value >> (8 * w)) != 0) ++w;
  return w;
}

// k * a by double-and-add.
template <Group G>
typename G::Element scalar_mul(const G& g, typename G::Element a, u64 k) {
  auto r = g.identity();
  while (k) {
    if (k & 1) r = g.op(r, a);
    k >>= 1;
    if (k) a = g.op(a, a);
  }
  return r;
}

// (Z/N, +)
class AdditiveGroup {
 public:
  using Element = u64;
  explicit AdditiveGroup(u64 n) : n_(n), width_(byte_width(n - 1)) {}
  u64 modulus() const { return n_; }
  Element identity() const { return 0; }
  Element op(Element a, Element b) const {
    u64 s = a + b;
    return (s >= n_ || s < a) ? s - n_ : s;
  }
  Element inverse(Element a) const { return a == 0 ? 0 : n_ - a; }
  std::string canonical_bytes(Element a) const { return le_bytes(a, width_); }

 private:
  u64 n_;
  unsigned width_;
};

// F_p^x or F_{2^m}^x under multiplication.
class FieldMultGroup {
 public:
  using Element = u64;
  explicit FieldMultGroup(ff::FieldSpec spec) : spec_(spec), width_(byte_width(spec.order() - 1)) {}
  const ff::FieldSpec& spec() const { return spec_; }
  // Order of the full multiplicative group.
  u64 order() const { return spec_.order() - 1; }
  Element identity() const { return 1; }
  Element op(Element a, Element b) const { return spec_.mul(a, b); }
  Element inverse(Element a) const { return spec_.inv(a); }
  std::string canonical_bytes(Element a) const { return le_bytes(a, width_); }

 private:
  ff::FieldSpec spec_;
  unsigned width_;
};

static_assert(Group<AdditiveGroup>);
static_assert(Group<FieldMultGroup>);

}  // namespace dlkit::generic
