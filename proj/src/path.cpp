#include "pathgrad/path.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pathgrad/errors.hpp"

namespace pathgrad {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_same_dim(const Vec &p, const Vec &q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::DimensionMismatch, "endpoints have dimensions " + std::to_string(p.size()) + " and " +
                                                  std::to_string(q.size()));
  }
  if (p.empty()) throw Error(ErrorCode::DimensionMismatch, "path endpoints are empty");
}

void require_parameter(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    std::ostringstream msg;
    msg << "path parameter " << t << " outside [0, 1]";
    throw Error(ErrorCode::ParameterOutOfRange, msg.str());
  }
}

/// Full knot list 0, times..., 1 after validation.
Vec full_knots(const Vec &times, std::size_t interior, std::string_view what) {
  Vec knots;
  knots.reserve(interior + 2);
  knots.push_back(0.0);
  if (times.empty()) {
    for (std::size_t m = 1; m <= interior; ++m) {
      knots.push_back(static_cast<double>(m) / static_cast<double>(interior + 1));
    }
  } else {
    if (times.size() != interior) {
      throw Error(ErrorCode::InvalidParameter,
                  std::string(what) + ": " + std::to_string(times.size()) + " knot times for " +
                      std::to_string(interior) + " vertices");
    }
    for (double t : times) {
      if (!(t > knots.back() && t < 1.0)) {
        throw Error(ErrorCode::InvalidParameter,
                    std::string(what) + ": knot times must be strictly increasing inside (0, 1)");
      }
      knots.push_back(t);
    }
  }
  knots.push_back(1.0);
  return knots;
}

struct Segment {
  std::size_t index;
  double t0;
  double t1;
};

/// Segment of [0, 1] split at the interior `times`, right-continuous; t = 1
/// belongs to the last segment.
Segment segment_of(const Vec &times, double t) {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const auto s = static_cast<std::size_t>(it - times.begin());
  return {s, s == 0 ? 0.0 : times[s - 1], s == times.size() ? 1.0 : times[s]};
}

double fritsch_carlson_slope(double h_prev, double h_next, double d_prev, double d_next) {
  if (d_prev * d_next <= 0.0) return 0.0;
  const double w1 = 2.0 * h_next + h_prev;
  const double w2 = h_next + 2.0 * h_prev;
  return (w1 + w2) / (w1 / d_prev + w2 / d_next);
}

}  // namespace

std::string_view to_string(PathKind kind) {
  switch (kind) {
    case PathKind::straight: return "straight";
    case PathKind::counterexample_quadratic: return "counterexample_quadratic";
    case PathKind::power_arc: return "power_arc";
    case PathKind::piecewise_linear: return "piecewise_linear";
    case PathKind::monotone_cubic: return "monotone_cubic";
  }
  return "unknown";
}

std::optional<PathKind> path_kind_from_string(std::string_view name) {
  for (auto kind : {PathKind::straight, PathKind::counterexample_quadratic, PathKind::power_arc,
                    PathKind::piecewise_linear, PathKind::monotone_cubic}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::increasing: return "increasing";
    case Direction::decreasing: return "decreasing";
    case Direction::constant: return "constant";
    case Direction::non_monotonic: return "non_monotonic";
  }
  return "unknown";
}

double sign_of(double x) {
  if (x > 0.0) return 1.0;
  if (x < 0.0) return -1.0;
  return 0.0;
}

PathSpec::PathSpec(PathKind kind, Vec p, Vec q, PathParams params)
    : kind_(kind), p_(std::move(p)), q_(std::move(q)), params_(std::move(params)), id_(to_string(kind)) {}

PathSpec make_straight(const Vec &p, const Vec &q) {
  require_same_dim(p, q);
  return PathSpec(PathKind::straight, p, q, StraightParams{});
}

PathSpec make_counterexample(const Vec &p, const Vec &q) {
  require_same_dim(p, q);
  if (p.size() != 2) {
    throw Error(ErrorCode::DimensionMismatch,
                "counterexample path is defined in 2 dimensions, got " + std::to_string(p.size()));
  }
  const double c = (p[0] - p[1]) * (p[0] - p[1]) + (q[0] - q[1]) * (q[0] - q[1]);
  return PathSpec(PathKind::counterexample_quadratic, p, q, CounterexampleParams{c});
}

PathSpec make_power_arc(double k) {
  if (!(k >= 1.0)) throw Error(ErrorCode::InvalidParameter, "power arc exponent must be >= 1");
  return make_power_path({0.0, 0.0}, {1.0, 1.0}, {1.0, k});
}

PathSpec make_power_path(const Vec &p, const Vec &q, const Vec &exponents) {
  require_same_dim(p, q);
  if (exponents.size() != p.size()) {
    throw Error(ErrorCode::DimensionMismatch, "power path needs one exponent per coordinate");
  }
  for (double k : exponents) {
    if (!(k >= 1.0)) throw Error(ErrorCode::InvalidParameter, "power path exponents must be >= 1");
  }
  return PathSpec(PathKind::power_arc, p, q, PowerArcParams{exponents});
}

PathSpec make_piecewise_linear(const Vec &p, const Vec &q, const Vec &times, const std::vector<Vec> &points) {
  require_same_dim(p, q);
  for (const auto &v : points) {
    if (v.size() != p.size()) throw Error(ErrorCode::DimensionMismatch, "piecewise_linear vertex dimension");
  }
  Vec knots = full_knots(times, points.size(), "piecewise_linear");
  Vec interior(knots.begin() + 1, knots.end() - 1);
  return PathSpec(PathKind::piecewise_linear, p, q, PiecewiseLinearParams{std::move(interior), points});
}

PathSpec make_monotone_cubic(const Vec &p, const Vec &q, const Vec &times, const std::vector<Vec> &points) {
  require_same_dim(p, q);
  for (const auto &v : points) {
    if (v.size() != p.size()) throw Error(ErrorCode::DimensionMismatch, "monotone_cubic vertex dimension");
  }
  Vec knots = full_knots(times, points.size(), "monotone_cubic");
  std::vector<Vec> values;
  values.reserve(points.size() + 2);
  values.push_back(p);
  for (const auto &v : points) values.push_back(v);
  values.push_back(q);

  const std::size_t n = knots.size();
  std::vector<Vec> slopes(n, Vec(p.size(), 0.0));
  for (std::size_t c = 0; c < p.size(); ++c) {
    Vec secant(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      secant[k] = (values[k + 1][c] - values[k][c]) / (knots[k + 1] - knots[k]);
    }
    slopes[0][c] = secant.front();
    slopes[n - 1][c] = secant.back();
    for (std::size_t k = 1; k + 1 < n; ++k) {
      slopes[k][c] =
          fritsch_carlson_slope(knots[k] - knots[k - 1], knots[k + 1] - knots[k], secant[k - 1], secant[k]);
    }
  }
  Vec interior(knots.begin() + 1, knots.end() - 1);
  return PathSpec(PathKind::monotone_cubic, p, q, MonotoneCubicParams{std::move(interior), points, slopes});
}

Vec PathSpec::eval(double t) const {
  require_parameter(t);
  const std::size_t n = dim();
  Vec x(n);
  std::visit(overloaded{
                 [&](const StraightParams &) {
                   for (std::size_t i = 0; i < n; ++i) x[i] = std::lerp(p_[i], q_[i], t);
                 },
                 [&](const CounterexampleParams &cp) {
                   const double bend = t * (t - 1.0) * cp.c;
                   for (std::size_t i = 0; i < n; ++i) {
                     x[i] = std::lerp(p_[i], q_[i], t) + bend * sign_of(q_[i] - p_[i]);
                   }
                 },
                 [&](const PowerArcParams &pp) {
                   for (std::size_t i = 0; i < n; ++i) x[i] = std::lerp(p_[i], q_[i], std::pow(t, pp.exponents[i]));
                 },
                 [&](const PiecewiseLinearParams &pl) {
                   const auto [s, t0, t1] = segment_of(pl.times, t);
                   const Vec &a = s == 0 ? p_ : pl.points[s - 1];
                   const Vec &b = s == pl.points.size() ? q_ : pl.points[s];
                   const double u = (t - t0) / (t1 - t0);
                   for (std::size_t i = 0; i < n; ++i) x[i] = std::lerp(a[i], b[i], u);
                 },
                 [&](const MonotoneCubicParams &mc) {
                   const auto [s, t0, t1] = segment_of(mc.times, t);
                   const Vec &a = s == 0 ? p_ : mc.points[s - 1];
                   const Vec &b = s == mc.points.size() ? q_ : mc.points[s];
                   const double h = t1 - t0;
                   const double u = (t - t0) / h;
                   const double u2 = u * u;
                   const double u3 = u2 * u;
                   const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
                   const double h10 = u3 - 2.0 * u2 + u;
                   const double h01 = -2.0 * u3 + 3.0 * u2;
                   const double h11 = u3 - u2;
                   for (std::size_t i = 0; i < n; ++i) {
                     x[i] = h00 * a[i] + h10 * h * mc.slopes[s][i] + h01 * b[i] + h11 * h * mc.slopes[s + 1][i];
                   }
                 },
             },
             params_);
  return x;
}

Vec PathSpec::derivative(double t) const {
  require_parameter(t);
  const std::size_t n = dim();
  Vec d(n);
  std::visit(overloaded{
                 [&](const StraightParams &) {
                   for (std::size_t i = 0; i < n; ++i) d[i] = q_[i] - p_[i];
                 },
                 [&](const CounterexampleParams &cp) {
                   const double bend = (2.0 * t - 1.0) * cp.c;
                   for (std::size_t i = 0; i < n; ++i) d[i] = (q_[i] - p_[i]) + bend * sign_of(q_[i] - p_[i]);
                 },
                 [&](const PowerArcParams &pp) {
                   for (std::size_t i = 0; i < n; ++i) {
                     const double k = pp.exponents[i];
                     d[i] = (q_[i] - p_[i]) * k * std::pow(t, k - 1.0);
                   }
                 },
                 [&](const PiecewiseLinearParams &pl) {
                   const auto [s, t0, t1] = segment_of(pl.times, t);
                   const Vec &a = s == 0 ? p_ : pl.points[s - 1];
                   const Vec &b = s == pl.points.size() ? q_ : pl.points[s];
                   const double h = t1 - t0;
                   for (std::size_t i = 0; i < n; ++i) d[i] = (b[i] - a[i]) / h;
                 },
                 [&](const MonotoneCubicParams &mc) {
                   const auto [s, t0, t1] = segment_of(mc.times, t);
                   const Vec &a = s == 0 ? p_ : mc.points[s - 1];
                   const Vec &b = s == mc.points.size() ? q_ : mc.points[s];
                   const double h = t1 - t0;
                   const double u = (t - t0) / h;
                   const double u2 = u * u;
                   const double dh00 = 6.0 * u2 - 6.0 * u;
                   const double dh10 = 3.0 * u2 - 4.0 * u + 1.0;
                   const double dh01 = -6.0 * u2 + 6.0 * u;
                   const double dh11 = 3.0 * u2 - 2.0 * u;
                   for (std::size_t i = 0; i < n; ++i) {
                     d[i] = (dh00 * a[i] + dh01 * b[i]) / h + dh10 * mc.slopes[s][i] + dh11 * mc.slopes[s + 1][i];
                   }
                 },
             },
             params_);
  return d;
}

Vec PathSpec::knots() const {
  if (const auto *pl = std::get_if<PiecewiseLinearParams>(&params_)) return pl->times;
  if (const auto *mc = std::get_if<MonotoneCubicParams>(&params_)) return mc->times;
  return {};
}

Vec eval_path(const PathSpec &path, double t) { return path.eval(t); }

Vec path_derivative(const PathSpec &path, double t) { return path.derivative(t); }

MonotonicityReport check_monotonic(const PathSpec &path, std::size_t grid_size) {
  if (grid_size < 2) throw Error(ErrorCode::InvalidParameter, "monotonicity grid needs at least 2 points");
  const std::size_t n = path.dim();
  std::vector<bool> saw_pos(n, false), saw_neg(n, false), saw_flat(n, false);
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(grid_size - 1);
    const Vec d = path.derivative(t);
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i] > kDerivativeSignTolerance) {
        saw_pos[i] = true;
      } else if (d[i] < -kDerivativeSignTolerance) {
        saw_neg[i] = true;
      } else {
        saw_flat[i] = true;
      }
    }
  }
  MonotonicityReport report;
  report.samples_used = grid_size;
  report.direction.resize(n);
  report.strict.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (saw_pos[i] && saw_neg[i]) {
      report.direction[i] = Direction::non_monotonic;
    } else if (saw_pos[i]) {
      report.direction[i] = Direction::increasing;
    } else if (saw_neg[i]) {
      report.direction[i] = Direction::decreasing;
    } else {
      report.direction[i] = Direction::constant;
    }
    report.strict[i] = !saw_flat[i];
  }
  return report;
}

bool check_endpoints(const PathSpec &path, const Vec &p, const Vec &q, double tol) {
  if (p.size() != path.dim() || q.size() != path.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "endpoint dimension does not match path");
  }
  if (!(tol >= 0.0)) throw Error(ErrorCode::InvalidParameter, "endpoint tolerance must be >= 0");
  const Vec a = path.eval(0.0);
  const Vec b = path.eval(1.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(std::abs(a[i] - p[i]) <= tol) || !(std::abs(b[i] - q[i]) <= tol)) return false;
  }
  return true;
}

}  // namespace pathgrad
