#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace graphkdd {

/// Seedable generator with a portable output stream.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the C++ standard.
/// The standard distributions are implementation-defined, so bounded integers
/// and unit reals are derived here by hand: integers by rejection sampling on
/// the raw 64-bit output, reals from the top 53 bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  /// Uniform real in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  /// Fisher-Yates shuffle driven by below().
  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Sub-seed offsets; every random stage derives from the single user seed.
namespace seed_offset {
inline constexpr std::uint64_t endpoints = 0;
inline constexpr std::uint64_t edge_pool = 1000;
inline constexpr std::uint64_t assignment = 2000;
inline constexpr std::uint64_t louvain = 3000;
inline constexpr std::uint64_t split = 4000;
inline constexpr std::uint64_t tree = 5000;
}  // namespace seed_offset

}  // namespace graphkdd
