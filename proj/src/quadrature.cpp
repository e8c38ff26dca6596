#include "pathgrad/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "pathgrad/errors.hpp"

namespace pathgrad {

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::midpoint: return "midpoint";
    case Rule::trapezoid: return "trapezoid";
    case Rule::gauss_legendre: return "gauss_legendre";
  }
  return "unknown";
}

std::optional<Rule> rule_from_string(std::string_view name) {
  if (name == "midpoint") return Rule::midpoint;
  if (name == "trapezoid") return Rule::trapezoid;
  if (name == "gauss_legendre" || name == "gauss") return Rule::gauss_legendre;
  return std::nullopt;
}

void validate(const QuadratureSpec &quad) {
  if (quad.nodes < 1) throw Error(ErrorCode::InvalidParameter, "quadrature needs at least one node");
  if (quad.rule == Rule::trapezoid && quad.nodes < 2) {
    throw Error(ErrorCode::InvalidParameter, "trapezoid rule needs at least two nodes");
  }
  double prev = 0.0;
  for (double s : quad.split_at) {
    if (!(s > prev && s < 1.0)) {
      throw Error(ErrorCode::InvalidParameter, "split_at must be sorted, distinct and inside (0, 1)");
    }
    prev = s;
  }
}

std::vector<QuadratureNode> gauss_legendre(std::size_t n) {
  // P_n(z) and P_n'(z) by the three-term recurrence.
  auto legendre = [n](double z) {
    double p1 = 1.0;
    double p2 = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / static_cast<double>(j);
    }
    return std::pair{p1, static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0)};
  };
  std::vector<QuadratureNode> out(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    if (n % 2 == 1 && i + 1 == half) z = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(z);
      const double prev = z;
      z = prev - p / dp;
      if (std::abs(z - prev) <= 1e-15) break;
    }
    const double dp = legendre(z).second;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    out[i] = {-z, w};
    out[n - 1 - i] = {z, w};
  }
  if (n % 2 == 1) out[n / 2].t = 0.0;
  return out;
}

std::vector<QuadratureNode> quadrature_nodes(const QuadratureSpec &quad, const Vec &extra_splits) {
  validate(quad);
  Vec breaks{0.0};
  breaks.insert(breaks.end(), quad.split_at.begin(), quad.split_at.end());
  for (double s : extra_splits) {
    if (s > 0.0 && s < 1.0) breaks.push_back(s);
  }
  breaks.push_back(1.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const std::size_t n = quad.nodes;
  std::vector<QuadratureNode> reference;
  if (quad.rule == Rule::gauss_legendre) reference = gauss_legendre(n);

  std::vector<QuadratureNode> nodes;
  nodes.reserve(n * (breaks.size() - 1));
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double a = breaks[b];
    const double len = breaks[b + 1] - a;
    switch (quad.rule) {
      case Rule::midpoint: {
        const double h = len / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) nodes.push_back({a + (static_cast<double>(k) + 0.5) * h, h});
        break;
      }
      case Rule::trapezoid: {
        const double h = len / static_cast<double>(n - 1);
        for (std::size_t k = 0; k < n; ++k) {
          const double t = k + 1 == n ? breaks[b + 1] : a + static_cast<double>(k) * h;
          nodes.push_back({t, (k == 0 || k + 1 == n) ? 0.5 * h : h});
        }
        break;
      }
      case Rule::gauss_legendre: {
        for (const auto &r : reference) nodes.push_back({a + 0.5 * len * (r.t + 1.0), 0.5 * len * r.weight});
        break;
      }
    }
  }
  return nodes;
}

}  // namespace pathgrad
