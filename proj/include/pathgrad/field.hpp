#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pathgrad/cantor.hpp"
#include "pathgrad/relu_net.hpp"

namespace pathgrad {

inline constexpr double kDefaultDomainLo = -10.0;
inline constexpr double kDefaultDomainHi = 10.0;

/// Closed axis-aligned box, one interval per coordinate.
struct Box {
  Vec lo;
  Vec hi;

  static Box uniform(std::size_t dim, double lo, double hi) {
    return Box{Vec(dim, lo), Vec(dim, hi)};
  }

  std::size_t dim() const { return lo.size(); }
  bool contains(std::span<const double> x) const;
  bool operator==(const Box &) const = default;
};

enum class FieldKind { linear, bilinear_product, max_coord, relu_net, witness, cantor_1d };

std::string_view to_string(FieldKind kind);
std::optional<FieldKind> field_kind_from_string(std::string_view name);

struct LinearParams {
  Vec coefficients;
  double offset = 0.0;
};

/// F(x) = x_i * x_j.
struct BilinearParams {
  std::size_t i = 0;
  std::size_t j = 1;
};

struct MaxCoordParams {};

/// F(x) = g(x_i) g(x_j) with g the ramp clamped to [0, beta - alpha].
struct WitnessParams {
  std::size_t i = 0;
  std::size_t j = 1;
  double alpha = 0.0;
  double beta = 1.0;
};

struct CantorParams {
  int depth = kDefaultCantorDepth;
};

using FieldParams =
    std::variant<LinearParams, BilinearParams, MaxCoordParams, ReluNetSpec, WitnessParams, CantorParams>;

struct GradientSample {
  Vec gradient;
  bool differentiable = true;
};

/// Clamped ramp used by the witness field: 0 below alpha, x - alpha in between,
/// beta - alpha above.
double witness_ramp(double x, double alpha, double beta);

/// Real-valued field on a box with an exact gradient.
///
/// Nondifferentiable points use a fixed selection: max-type terms take the
/// lowest-index attaining branch, ReLU and ramp corners take slope 0, and the
/// Cantor staircase reports 0 everywhere. `is_differentiable_at` (or the flag in
/// `gradient_sample`) tells the caller when that selection was used.
///
/// Immutable after construction; every query is pure.
class ScalarField {
 public:
  static ScalarField linear(Vec coefficients, double offset = 0.0, std::optional<Box> box = {});
  static ScalarField bilinear_product(std::size_t dim = 2, std::size_t i = 0, std::size_t j = 1,
                                      std::optional<Box> box = {});
  static ScalarField max_coord(std::size_t dim, std::optional<Box> box = {});
  static ScalarField relu_net(ReluNetSpec net, std::optional<Box> box = {});
  static ScalarField witness(std::size_t dim, std::size_t i, std::size_t j, double alpha, double beta,
                             std::optional<Box> box = {});
  /// One-dimensional; the box defaults to [0, 1].
  static ScalarField cantor(int depth = kDefaultCantorDepth);

  FieldKind kind() const { return kind_; }
  std::size_t dim() const { return domain_.dim(); }
  const Box &domain() const { return domain_; }
  const FieldParams &params() const { return params_; }
  std::optional<double> lipschitz_bound() const { return lipschitz_; }

  /// Identifier echoed into reports; defaults to the kind name.
  const std::string &id() const { return id_; }
  ScalarField &set_id(std::string id) {
    id_ = std::move(id);
    return *this;
  }

  /// Coordinate pair in which the field is symmetric by construction.
  std::optional<std::pair<std::size_t, std::size_t>> symmetric_pair() const;

  double evaluate(std::span<const double> x) const;
  Vec gradient(std::span<const double> x) const;
  bool is_differentiable_at(std::span<const double> x) const;
  GradientSample gradient_sample(std::span<const double> x) const;

  /// Label of the smooth piece containing x. Two points with equal signatures
  /// lie on the same closed-form branch. Empty for globally smooth fields.
  std::vector<std::int64_t> region_signature(std::span<const double> x) const;

 private:
  ScalarField(FieldKind kind, FieldParams params, Box domain, std::optional<double> lipschitz);

  void require_inside(std::span<const double> x) const;
  GradientSample gradient_unchecked(std::span<const double> x) const;

  FieldKind kind_;
  FieldParams params_;
  Box domain_;
  std::optional<double> lipschitz_;
  std::string id_;
};

/// Central differences (F(x + h e_i) - F(x - h e_i)) divided by the realized step (x_i + h) - (x_i - h).
Vec finite_diff_gradient(const ScalarField &field, std::span<const double> x, double h);

}  // namespace pathgrad
