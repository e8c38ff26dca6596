#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pathgrad/field.hpp"

namespace pathgrad {

enum class PathKind { straight, counterexample_quadratic, power_arc, piecewise_linear, monotone_cubic };

std::string_view to_string(PathKind kind);
std::optional<PathKind> path_kind_from_string(std::string_view name);

struct StraightParams {};

/// Quadratic detour `t(t-1) * c * sgn(q_i - p_i)` added to the straight line,
/// with c = (p1 - p2)^2 + (q1 - q2)^2.
struct CounterexampleParams {
  double c = 0.0;
};

/// gamma_i(t) = p_i + (q_i - p_i) t^{k_i}.
struct PowerArcParams {
  Vec exponents;
};

/// Interior vertices `points[m]` reached at parameters `times[m]`.
struct PiecewiseLinearParams {
  Vec times;
  std::vector<Vec> points;
};

/// Fritsch-Carlson monotone cubic Hermite interpolation per coordinate through
/// (0, p), (times[m], points[m]), (1, q).
struct MonotoneCubicParams {
  Vec times;
  std::vector<Vec> points;
  std::vector<Vec> slopes;  // per knot (p, interior..., q), per coordinate
};

using PathParams =
    std::variant<StraightParams, CounterexampleParams, PowerArcParams, PiecewiseLinearParams, MonotoneCubicParams>;

/// Smooth (or piecewise smooth) path on [0, 1] with gamma(0) = p, gamma(1) = q exactly.
class PathSpec {
 public:
  std::size_t dim() const { return p_.size(); }
  PathKind kind() const { return kind_; }
  const Vec &start() const { return p_; }
  const Vec &end() const { return q_; }
  const PathParams &params() const { return params_; }

  const std::string &id() const { return id_; }
  PathSpec &set_id(std::string id) {
    id_ = std::move(id);
    return *this;
  }

  Vec eval(double t) const;
  /// One-sided (right, or left at t = 1) at piecewise-linear knots.
  Vec derivative(double t) const;

  /// Parameters in (0, 1) where gamma' may jump.
  Vec knots() const;

  friend PathSpec make_straight(const Vec &p, const Vec &q);
  friend PathSpec make_counterexample(const Vec &p, const Vec &q);
  friend PathSpec make_power_path(const Vec &p, const Vec &q, const Vec &exponents);
  friend PathSpec make_piecewise_linear(const Vec &p, const Vec &q, const Vec &times,
                                        const std::vector<Vec> &points);
  friend PathSpec make_monotone_cubic(const Vec &p, const Vec &q, const Vec &times,
                                      const std::vector<Vec> &points);

 private:
  PathSpec(PathKind kind, Vec p, Vec q, PathParams params);

  PathKind kind_;
  Vec p_;
  Vec q_;
  PathParams params_;
  std::string id_;
};

PathSpec make_straight(const Vec &p, const Vec &q);
PathSpec make_counterexample(const Vec &p, const Vec &q);
/// (t, t^k) from (0, 0) to (1, 1).
PathSpec make_power_arc(double k);
PathSpec make_power_path(const Vec &p, const Vec &q, const Vec &exponents);
/// Knot times must be strictly increasing inside (0, 1). Empty `times` spaces
/// the vertices uniformly.
PathSpec make_piecewise_linear(const Vec &p, const Vec &q, const Vec &times, const std::vector<Vec> &points);
/// Shape preserving: monotone knot data gives a monotone coordinate.
PathSpec make_monotone_cubic(const Vec &p, const Vec &q, const Vec &times, const std::vector<Vec> &points);

/// sgn with sgn(0) = 0.
double sign_of(double x);

Vec eval_path(const PathSpec &path, double t);
Vec path_derivative(const PathSpec &path, double t);

enum class Direction { increasing, decreasing, constant, non_monotonic };

std::string_view to_string(Direction d);

struct MonotonicityReport {
  std::vector<Direction> direction;
  std::vector<bool> strict;
  std::size_t samples_used = 0;

  bool monotonic(std::size_t i) const { return direction[i] != Direction::non_monotonic; }
};

inline constexpr std::size_t kDefaultMonotonicGrid = 1001;
inline constexpr double kDerivativeSignTolerance = 1e-12;

/// Samples gamma' on a uniform grid. A coordinate is non_monotonic iff its
/// sampled derivative takes both signs beyond 1e-12; strict iff |gamma_i'| > 1e-12
/// at every sample.
MonotonicityReport check_monotonic(const PathSpec &path, std::size_t grid_size = kDefaultMonotonicGrid);

bool check_endpoints(const PathSpec &path, const Vec &p, const Vec &q, double tol);

}  // namespace pathgrad
