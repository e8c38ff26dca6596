#include "pathgrad/relu_net.hpp"

#include <cmath>

#include "pathgrad/rng.hpp"

namespace pathgrad {

std::vector<std::size_t> ReluNetSpec::layer_widths() const {
  std::vector<std::size_t> widths;
  if (layers.empty()) return widths;
  widths.push_back(layers.front().inputs);
  for (const auto &layer : layers) widths.push_back(layer.outputs);
  return widths;
}

std::vector<std::string> ReluNetSpec::shape_problems() const {
  std::vector<std::string> problems;
  if (layers.empty()) {
    problems.emplace_back("relu_net has no layers");
    return problems;
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto &layer = layers[l];
    const std::string where = "layer " + std::to_string(l);
    if (layer.inputs == 0 || layer.outputs == 0) problems.push_back(where + ": zero width");
    if (layer.weights.size() != layer.inputs * layer.outputs) {
      problems.push_back(where + ": weight matrix has " + std::to_string(layer.weights.size()) +
                         " entries, expected " + std::to_string(layer.outputs) + "x" +
                         std::to_string(layer.inputs));
    }
    if (layer.bias.size() != layer.outputs) {
      problems.push_back(where + ": bias has " + std::to_string(layer.bias.size()) + " entries, expected " +
                         std::to_string(layer.outputs));
    }
    if (l > 0 && layers[l - 1].outputs != layer.inputs) {
      problems.push_back(where + ": expects " + std::to_string(layer.inputs) + " inputs but layer " +
                         std::to_string(l - 1) + " produces " + std::to_string(layers[l - 1].outputs));
    }
  }
  if (activation == Activation::relu && layers.back().outputs != 1) {
    problems.push_back("layer " + std::to_string(layers.size() - 1) +
                       ": relu activation needs a scalar output layer");
  }
  return problems;
}

double ReluNetSpec::lipschitz_bound() const {
  double bound = 1.0;
  for (const auto &layer : layers) {
    double sq = 0.0;
    for (double w : layer.weights) sq += w * w;
    bound *= std::sqrt(sq);
  }
  return bound;
}

namespace {

struct Forward {
  std::vector<Vec> pre;  // preactivations per layer
  double value = 0.0;
  std::size_t argmax = 0;
  bool tie = false;
};

Forward forward(const ReluNetSpec &net, std::span<const double> x) {
  Forward f;
  f.pre.reserve(net.layers.size());
  Vec input(x.begin(), x.end());
  const std::size_t last = net.layers.size() - 1;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto &layer = net.layers[l];
    Vec z(layer.outputs);
    for (std::size_t r = 0; r < layer.outputs; ++r) {
      double acc = layer.bias[r];
      const double *row = layer.weights.data() + r * layer.inputs;
      for (std::size_t c = 0; c < layer.inputs; ++c) acc += row[c] * input[c];
      z[r] = acc;
    }
    f.pre.push_back(z);
    const bool apply_relu = l < last || net.activation == Activation::relu;
    if (apply_relu) {
      for (double &v : z) {
        if (v == 0.0) f.tie = true;
        v = v > 0.0 ? v : 0.0;
      }
    }
    input = std::move(z);
  }
  if (net.activation == Activation::relu) {
    f.value = input[0];
  } else {
    std::size_t best = 0;
    for (std::size_t r = 1; r < input.size(); ++r) {
      if (input[r] > input[best]) best = r;
    }
    for (std::size_t r = 0; r < input.size(); ++r) {
      if (r != best && input[r] == input[best]) f.tie = true;
    }
    f.argmax = best;
    f.value = input[best];
  }
  return f;
}

}  // namespace

NetEvaluation run_relu_net(const ReluNetSpec &net, std::span<const double> x, bool with_gradient) {
  Forward f = forward(net, x);
  NetEvaluation out;
  out.value = f.value;
  out.differentiable = !f.tie;
  if (!with_gradient) return out;

  const std::size_t last = net.layers.size() - 1;
  // Sensitivity of the output to each preactivation of the current layer.
  Vec delta(net.layers[last].outputs, 0.0);
  if (net.activation == Activation::relu) {
    delta[0] = f.pre[last][0] > 0.0 ? 1.0 : 0.0;
  } else {
    delta[f.argmax] = 1.0;
  }
  for (std::size_t l = net.layers.size(); l-- > 0;) {
    const auto &layer = net.layers[l];
    Vec upstream(layer.inputs, 0.0);
    for (std::size_t r = 0; r < layer.outputs; ++r) {
      if (delta[r] == 0.0) continue;
      const double *row = layer.weights.data() + r * layer.inputs;
      for (std::size_t c = 0; c < layer.inputs; ++c) upstream[c] += delta[r] * row[c];
    }
    if (l > 0) {
      const Vec &below = f.pre[l - 1];
      for (std::size_t c = 0; c < upstream.size(); ++c) {
        if (!(below[c] > 0.0)) upstream[c] = 0.0;
      }
    }
    delta = std::move(upstream);
  }
  out.gradient = std::move(delta);
  return out;
}

std::vector<std::int64_t> relu_net_pattern(const ReluNetSpec &net, std::span<const double> x) {
  Forward f = forward(net, x);
  std::vector<std::int64_t> pattern;
  const std::size_t last = net.layers.size() - 1;
  for (std::size_t l = 0; l < f.pre.size(); ++l) {
    if (l == last && net.activation == Activation::max_pool_final) break;
    for (double z : f.pre[l]) pattern.push_back(z > 0.0 ? 1 : (z < 0.0 ? 0 : 2));
  }
  if (net.activation == Activation::max_pool_final) pattern.push_back(static_cast<std::int64_t>(f.argmax));
  return pattern;
}

ReluNetSpec random_relu_net(std::span<const std::size_t> widths, std::uint64_t seed, Activation activation) {
  Rng rng(seed);
  ReluNetSpec net;
  net.activation = activation;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    DenseLayer layer;
    layer.inputs = widths[l];
    layer.outputs = widths[l + 1];
    const double scale = std::sqrt(3.0 / static_cast<double>(layer.inputs));
    layer.weights.resize(layer.inputs * layer.outputs);
    for (double &w : layer.weights) w = (2.0 * rng.uniform() - 1.0) * scale;
    layer.bias.resize(layer.outputs);
    for (double &b : layer.bias) b = (2.0 * rng.uniform() - 1.0) * 0.5;
    net.layers.push_back(std::move(layer));
  }
  return net;
}

}  // namespace pathgrad
