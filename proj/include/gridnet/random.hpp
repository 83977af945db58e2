#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace gridnet {

/// Seeded source used everywhere randomness appears. The engine is
/// std::mt19937_64, whose output sequence is fixed by the C++ standard; the
/// draws below avoid the implementation-defined std:: distributions so a
/// seed produces the same graph on every conforming toolchain.
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
    : engine_(seed)
  {
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), rejection sampled (no modulo bias).
  std::uint64_t below(std::uint64_t bound)
  {
    if (bound <= 1)
      return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do
      x = engine_();
    while (x >= limit);
    return x % bound;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v)
  {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[below(i)]);
  }

private:
  std::mt19937_64 engine_;
};

} // namespace gridnet
