#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace tweetsent {

/// Seedable pseudorandom source used for every stochastic step.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Bounded integers and reals are derived here rather than
/// through <random> distributions (whose algorithms are implementation
/// defined), so a seed yields the same draws on every platform:
///   - uniform_index(n): rejection sampling, x drawn until x >= (2^64 - n) mod n,
///     result x mod n.
///   - uniform_real(): top 53 bits of one draw scaled by 2^-53, in [0, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  std::size_t uniform_index(std::size_t n) {
    const auto bound = static_cast<std::uint64_t>(n);
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t x = engine_();
    while (x < threshold) x = engine_();
    return static_cast<std::size_t>(x % bound);
  }

  double uniform_real() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }

  // Fisher-Yates, walking from the back.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = uniform_index(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tweetsent
