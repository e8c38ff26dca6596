#pragma once

#include <cstdint>

namespace pathgrad {

inline constexpr int kDefaultCantorDepth = 24;

struct CantorPoint {
  double value = 0.0;
  /// x lies in a middle third removed within the first `depth` ternary digits.
  bool on_plateau = false;
  /// Ternary prefix up to and including the terminating 1 digit, encoded base 3
  /// with a leading 1 so that prefixes of different length stay distinct.
  /// Only meaningful when on_plateau.
  std::int64_t plateau_code = 0;
};

/// Depth-truncated Cantor staircase.
///
/// Walks the ternary digits of x: 0 emits binary 0, 2 emits binary 1 and the
/// first 1 emits a final binary 1 and stops. If `depth` digits pass without a 1,
/// the remaining cell is interpolated linearly, which keeps the result
/// continuous, nondecreasing and within 2^-depth of the limit function.
CantorPoint cantor_point(double x, int depth);

double cantor_value(double x, int depth = kDefaultCantorDepth);

}  // namespace pathgrad
