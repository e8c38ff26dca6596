#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "pathgrad/types.hpp"

namespace pathgrad {

enum class Rule { midpoint, trapezoid, gauss_legendre };

std::string_view to_string(Rule rule);
/// Accepts "midpoint", "trapezoid", "gauss_legendre" and the short form "gauss".
std::optional<Rule> rule_from_string(std::string_view name);

/// `nodes` counts nodes per panel. Panels break at `split_at`, which must be
/// sorted, distinct and strictly inside (0, 1).
struct QuadratureSpec {
  Rule rule = Rule::midpoint;
  std::size_t nodes = 64;
  Vec split_at;
};

struct QuadratureNode {
  double t;
  double weight;
};

/// Throws InvalidParameter when the spec breaks its invariants.
void validate(const QuadratureSpec &quad);

/// Gauss-Legendre abscissae and weights on [-1, 1], ascending.
std::vector<QuadratureNode> gauss_legendre(std::size_t n);

/// Nodes over [0, 1] in ascending t. `extra_splits` (path knots, kink
/// crossings) are merged with quad.split_at; values outside (0, 1) are ignored.
std::vector<QuadratureNode> quadrature_nodes(const QuadratureSpec &quad, const Vec &extra_splits = {});

/// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace pathgrad
