#pragma once

// Seeded random helpers. mt19937_64 has a standard-defined output sequence,
// and the derived draws below avoid distribution classes (whose streams are
// implementation-defined), so every sample is reproducible across platforms.

#include <cstdint>
#include <random>
#include <vector>

#include "bct/rational.hpp"

namespace bct {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform draw from [0, bound) via the multiply-shift reduction.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  // Uniform draw from [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool coin() { return (next() & 1u) != 0; }

  // Random probability vector with the given support size; entries are
  // positive multiples of 1/(size * max_num) so denominators stay small.
  std::vector<Rational> distribution(std::size_t size, std::uint64_t max_num = 16) {
    std::vector<std::uint64_t> raw(size);
    std::uint64_t total = 0;
    for (auto& r : raw) {
      r = 1 + below(max_num);
      total += r;
    }
    std::vector<Rational> p(size);
    for (std::size_t k = 0; k < size; ++k) p[k] = Rational(raw[k], total);
    return p;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace bct
