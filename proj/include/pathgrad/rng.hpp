#pragma once

#include <cstdint>
#include <random>

namespace pathgrad {

/// Reproducible random source: MT19937-64 (the std::mt19937_64 parameter set)
/// with doubles formed from the top 53 bits, `(x >> 11) * 2^-53`.
///
/// std::uniform_real_distribution is implementation-defined, so it is never
/// used; every draw goes through `uniform()`, which makes sequences identical
/// across standard libraries and languages.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] (inclusive), via modulo reduction.
  int uniform_int(int lo, int hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pathgrad
