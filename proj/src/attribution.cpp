#include "pathgrad/attribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pathgrad {

namespace {

void require_inside(const ScalarField &field, const Vec &x, double t) {
  if (!field.domain().contains(x)) {
    std::ostringstream msg;
    msg << "path leaves the domain of field '" << field.id() << "' at t=" << t;
    throw PathLeavesDomainError(t, msg.str());
  }
}

void finish(AttributionReport &report, std::vector<CompensatedSum> &acc) {
  CompensatedSum total;
  report.attributions.resize(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    report.attributions[i] = acc[i].value();
    total.add(report.attributions[i]);
  }
  report.sum = total.value();
  report.residual = report.sum - (report.f_input - report.f_base);
  report.all_nodes_nondifferentiable = report.total_nodes > 0 && report.nondiff_nodes == report.total_nodes;
}

}  // namespace

AttributionReport integrated_gradients(const ScalarField &field, const PathSpec &path, const QuadratureSpec &quad) {
  if (field.dim() != path.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "field has dimension " + std::to_string(field.dim()) +
                                                  ", path has dimension " + std::to_string(path.dim()));
  }
  const auto nodes = quadrature_nodes(quad, path.knots());

  AttributionReport report;
  report.quadrature = quad;
  report.path_id = path.id();
  report.field_id = field.id();

  const Vec x0 = path.eval(0.0);
  const Vec x1 = path.eval(1.0);
  require_inside(field, x0, 0.0);
  require_inside(field, x1, 1.0);
  report.f_base = field.evaluate(x0);
  report.f_input = field.evaluate(x1);

  std::vector<CompensatedSum> acc(path.dim());
  for (const auto &node : nodes) {
    const Vec x = path.eval(node.t);
    require_inside(field, x, node.t);
    const GradientSample g = field.gradient_sample(x);
    const Vec d = path.derivative(node.t);
    if (!g.differentiable) ++report.nondiff_nodes;
    for (std::size_t i = 0; i < d.size(); ++i) acc[i].add(node.weight * g.gradient[i] * d[i]);
  }
  report.total_nodes = nodes.size();
  finish(report, acc);
  return report;
}

AttributionReport ig_straight(const ScalarField &field, const Vec &p, const Vec &q, const QuadratureSpec &quad) {
  if (p.size() != q.size() || p.size() != field.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "endpoint dimensions do not match the field");
  }
  const auto nodes = quadrature_nodes(quad);

  AttributionReport report;
  report.quadrature = quad;
  report.path_id = std::string(to_string(PathKind::straight));
  report.field_id = field.id();
  require_inside(field, p, 0.0);
  require_inside(field, q, 1.0);
  report.f_base = field.evaluate(p);
  report.f_input = field.evaluate(q);

  const std::size_t n = p.size();
  std::vector<CompensatedSum> mean_grad(n);
  Vec x(n);
  for (const auto &node : nodes) {
    for (std::size_t i = 0; i < n; ++i) x[i] = std::lerp(p[i], q[i], node.t);
    require_inside(field, x, node.t);
    const GradientSample g = field.gradient_sample(x);
    if (!g.differentiable) ++report.nondiff_nodes;
    for (std::size_t i = 0; i < n; ++i) mean_grad[i].add(node.weight * g.gradient[i]);
  }
  report.total_nodes = nodes.size();

  std::vector<CompensatedSum> acc(n);
  for (std::size_t i = 0; i < n; ++i) acc[i].add((q[i] - p[i]) * mean_grad[i].value());
  finish(report, acc);
  return report;
}

double completeness_residual(const AttributionReport &report) {
  return std::abs(report.sum - (report.f_input - report.f_base));
}

double symmetry_gap(const AttributionReport &report, std::size_t i, std::size_t j) {
  const std::size_t n = report.attributions.size();
  if (i >= n || j >= n) {
    throw Error(ErrorCode::IndexOutOfRange,
                "symmetry_gap indices " + std::to_string(i) + ", " + std::to_string(j) + " for " +
                    std::to_string(n) + " attributions");
  }
  if (i == j) throw Error(ErrorCode::IndexOutOfRange, "symmetry_gap needs two distinct indices");
  return report.attributions[i] - report.attributions[j];
}

NotConvergedError::NotConvergedError(AttributionReport report)
    : Error(ErrorCode::NotConverged, [&] {
        std::ostringstream msg;
        msg << "residual " << report.residual << " after " << report.quadrature.nodes << " nodes per panel";
        return msg.str();
      }()),
      report_(std::move(report)) {}

const AttributionReport &RefineResult::value_or_throw() const {
  if (!converged) throw NotConvergedError(report);
  return report;
}

RefineResult refine(const ScalarField &field, const PathSpec &path, double tol, std::size_t max_nodes,
                    const Vec &split_at) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "refine tolerance must be positive");
  if (max_nodes < 2) throw Error(ErrorCode::InvalidParameter, "refine max_nodes must be >= 2");

  RefineResult result;
  QuadratureSpec quad{Rule::midpoint, std::min(kRefineStartNodes, max_nodes), split_at};
  for (;;) {
    result.report = integrated_gradients(field, path, quad);
    result.history.emplace_back(quad.nodes, result.report.residual);
    if (std::abs(result.report.residual) <= tol) {
      result.converged = true;
      break;
    }
    if (quad.nodes * 2 > max_nodes) break;
    quad.nodes *= 2;
  }
  result.report.converged = result.converged;
  return result;
}

Vec kink_crossings(const ScalarField &field, const PathSpec &path, std::size_t grid) {
  if (field.kind() == FieldKind::cantor_1d) return {};
  if (field.dim() != path.dim()) throw Error(ErrorCode::DimensionMismatch, "field and path dimensions differ");
  if (grid < 2) grid = 2;

  auto signature = [&](double t) { return field.region_signature(path.eval(t)); };
  Vec found;

  auto bisect = [&](auto &&self, double a, const std::vector<std::int64_t> &sa, double b,
                    const std::vector<std::int64_t> &sb) -> void {
    if (b - a <= 1e-14) {
      found.push_back(0.5 * (a + b));
      return;
    }
    const double m = 0.5 * (a + b);
    const auto sm = signature(m);
    if (sm != sa) self(self, a, sa, m, sm);
    if (sm != sb) self(self, m, sm, b, sb);
  };

  auto prev = signature(0.0);
  if (prev.empty()) return {};
  double t_prev = 0.0;
  for (std::size_t k = 1; k < grid; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(grid - 1);
    auto cur = signature(t);
    if (cur != prev) bisect(bisect, t_prev, prev, t, cur);
    prev = std::move(cur);
    t_prev = t;
  }

  Vec out;
  std::sort(found.begin(), found.end());
  for (double t : found) {
    if (!(t > 1e-12 && t < 1.0 - 1e-12)) continue;
    if (!out.empty() && t - out.back() <= 1e-13) continue;
    out.push_back(t);
  }
  return out;
}

}  // namespace pathgrad
