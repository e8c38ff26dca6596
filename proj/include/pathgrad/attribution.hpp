#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pathgrad/errors.hpp"
#include "pathgrad/field.hpp"
#include "pathgrad/path.hpp"
#include "pathgrad/quadrature.hpp"

namespace pathgrad {

struct AttributionReport {
  Vec attributions;
  double sum = 0.0;
  double f_input = 0.0;  // F(gamma(1))
  double f_base = 0.0;   // F(gamma(0))
  double residual = 0.0; // sum - (f_input - f_base)
  std::size_t nondiff_nodes = 0;
  std::size_t total_nodes = 0;
  /// Every node hit the field's kink set, e.g. a max field integrated along its tie diagonal.
  bool all_nodes_nondifferentiable = false;
  QuadratureSpec quadrature;
  std::string path_id;
  std::string field_id;
  /// Set by refine only.
  std::optional<bool> converged;
};

/// IG_i = integral over gamma of dF/dx_i dx_i, by quadrature in t on
/// dF/dx_i(gamma(t)) * gamma_i'(t). Panels also break at the path's knots.
///
/// Nodes on the kink set are integrated with the field's subgradient selection
/// and counted in nondiff_nodes. Throws PathLeavesDomainError when a node or an
/// endpoint falls outside the field's box.
AttributionReport integrated_gradients(const ScalarField &field, const PathSpec &path, const QuadratureSpec &quad);

/// Straight-line IG in factored form: (q_i - p_i) * integral_0^1 dF/dx_i dt.
AttributionReport ig_straight(const ScalarField &field, const Vec &p, const Vec &q, const QuadratureSpec &quad);

/// |sum_i IG_i - (F(gamma(1)) - F(gamma(0)))|.
double completeness_residual(const AttributionReport &report);

/// IG_i - IG_j.
double symmetry_gap(const AttributionReport &report, std::size_t i, std::size_t j);

class NotConvergedError : public Error {
 public:
  explicit NotConvergedError(AttributionReport report);
  const AttributionReport &report() const noexcept { return report_; }

 private:
  AttributionReport report_;
};

struct RefineResult {
  AttributionReport report;
  bool converged = false;
  /// (nodes per panel, signed residual) for each pass.
  std::vector<std::pair<std::size_t, double>> history;

  double last_residual() const { return history.back().second; }
  std::optional<double> previous_residual() const {
    if (history.size() < 2) return std::nullopt;
    return history[history.size() - 2].second;
  }
  /// Returns the report, or throws NotConvergedError carrying it.
  const AttributionReport &value_or_throw() const;
};

inline constexpr std::size_t kRefineStartNodes = 16;

/// Midpoint rule from 16 nodes per panel, doubling until |residual| <= tol or
/// the next count would exceed max_nodes.
RefineResult refine(const ScalarField &field, const PathSpec &path, double tol, std::size_t max_nodes,
                    const Vec &split_at = {});

/// Parameters in (0, 1) where the field changes smooth piece along the path,
/// found by comparing region signatures on a uniform grid and bisecting each
/// change down to ~1e-14. Empty for globally smooth fields and for the Cantor
/// staircase (it has 2^depth pieces).
Vec kink_crossings(const ScalarField &field, const PathSpec &path, std::size_t grid = 1024);

}  // namespace pathgrad
