#pragma once

#include <cstdint>
#include <random>

namespace dlkit::ff {

// Seeded generator shared by every randomized routine. Bounded draws use
// rejection sampling so sequences do not depend on the standard library's
// distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return gen_(); }

  // Uniform in [0, bound). bound == 0 means the full 64-bit range.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) return gen_();
    const std::uint64_t threshold = (std::uint64_t{0} - bound) % bound;
    for (;;) {
      std::uint64_t x = gen_();
      if (x >= threshold) return x % bound;
    }
  }

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Independent child stream, used to give parallel workers disjoint seeds.
  Rng fork(std::uint64_t stream) const {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_;
};

}  // namespace dlkit::ff
