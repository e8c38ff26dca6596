#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pathgrad/types.hpp"

namespace pathgrad {

enum class Activation {
  relu,            // ReLU after every layer, output included
  max_pool_final,  // ReLU on hidden layers, output is the max over the last layer
};

/// Fully connected layer; `weights` is row-major, `outputs x inputs`.
struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  Vec weights;
  Vec bias;

  double weight(std::size_t row, std::size_t col) const { return weights[row * inputs + col]; }
};

struct ReluNetSpec {
  std::vector<DenseLayer> layers;
  Activation activation = Activation::relu;

  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().inputs; }

  /// [input_dim, width_1, ..., width_L].
  std::vector<std::size_t> layer_widths() const;

  /// Problems with shape chaining, one string per offending layer. Empty when valid.
  std::vector<std::string> shape_problems() const;

  /// Product of per-layer Frobenius norms. ReLU and max are 1-Lipschitz, and the
  /// Frobenius norm bounds the operator 2-norm.
  double lipschitz_bound() const;
};

struct NetEvaluation {
  double value = 0.0;
  Vec gradient;  // empty unless requested
  bool differentiable = true;
};

NetEvaluation run_relu_net(const ReluNetSpec &net, std::span<const double> x, bool with_gradient);

/// Activation pattern: one entry per ReLU unit (1 active, 0 inactive, 2 exactly
/// zero), then the argmax index for max_pool_final.
std::vector<std::int64_t> relu_net_pattern(const ReluNetSpec &net, std::span<const double> x);

/// Deterministic random network.
///
/// Draws come from `Rng(seed)` in this order: for each layer, its weights in
/// row-major order, each `(2u - 1) * sqrt(3 / inputs)`, then its biases, each
/// `(2u - 1) * 0.5`, where `u = Rng::uniform()`.
ReluNetSpec random_relu_net(std::span<const std::size_t> widths, std::uint64_t seed,
                            Activation activation = Activation::relu);

}  // namespace pathgrad
