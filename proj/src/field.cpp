#include "pathgrad/field.hpp"

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

Box box_or_default(std::optional<Box> box, std::size_t dim) {
  if (!box) return Box::uniform(dim, kDefaultDomainLo, kDefaultDomainHi);
  if (box->lo.size() != dim || box->hi.size() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "domain box dimension does not match field dimension");
  }
  for (std::size_t k = 0; k < dim; ++k) {
    if (!(box->lo[k] <= box->hi[k])) {
      throw Error(ErrorCode::InvalidParameter, "domain box has lo > hi in coordinate " + std::to_string(k));
    }
  }
  return *std::move(box);
}

void require_pair(std::size_t dim, std::size_t i, std::size_t j) {
  if (i >= dim || j >= dim) throw Error(ErrorCode::IndexOutOfRange, "coordinate index outside field dimension");
  if (i == j) throw Error(ErrorCode::InvalidParameter, "coordinate pair must be distinct");
}

double abs_max(double a, double b) { return std::max(std::abs(a), std::abs(b)); }

std::int64_t ramp_region(double x, double alpha, double beta) {
  if (x == alpha) return 3;
  if (x == beta) return 4;
  if (x < alpha) return 0;
  return x < beta ? 1 : 2;
}

}  // namespace

bool Box::contains(std::span<const double> x) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] >= lo[k] && x[k] <= hi[k])) return false;
  }
  return true;
}

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::linear: return "linear";
    case FieldKind::bilinear_product: return "bilinear_product";
    case FieldKind::max_coord: return "max_coord";
    case FieldKind::relu_net: return "relu_net";
    case FieldKind::witness: return "witness";
    case FieldKind::cantor_1d: return "cantor_1d";
  }
  return "unknown";
}

std::optional<FieldKind> field_kind_from_string(std::string_view name) {
  for (auto kind : {FieldKind::linear, FieldKind::bilinear_product, FieldKind::max_coord, FieldKind::relu_net,
                    FieldKind::witness, FieldKind::cantor_1d}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

double witness_ramp(double x, double alpha, double beta) {
  if (x <= alpha) return 0.0;
  if (x >= beta) return beta - alpha;
  return x - alpha;
}

ScalarField::ScalarField(FieldKind kind, FieldParams params, Box domain, std::optional<double> lipschitz)
    : kind_(kind),
      params_(std::move(params)),
      domain_(std::move(domain)),
      lipschitz_(lipschitz),
      id_(to_string(kind)) {}

ScalarField ScalarField::linear(Vec coefficients, double offset, std::optional<Box> box) {
  if (coefficients.empty()) throw Error(ErrorCode::InvalidParameter, "linear field needs coefficients");
  const std::size_t dim = coefficients.size();
  double sq = 0.0;
  for (double c : coefficients) sq += c * c;
  return ScalarField(FieldKind::linear, LinearParams{std::move(coefficients), offset}, box_or_default(box, dim),
                     std::sqrt(sq));
}

ScalarField ScalarField::bilinear_product(std::size_t dim, std::size_t i, std::size_t j, std::optional<Box> box) {
  require_pair(dim, i, j);
  Box b = box_or_default(std::move(box), dim);
  const double mi = abs_max(b.lo[i], b.hi[i]);
  const double mj = abs_max(b.lo[j], b.hi[j]);
  const double k = std::sqrt(mi * mi + mj * mj);
  return ScalarField(FieldKind::bilinear_product, BilinearParams{i, j}, std::move(b), k);
}

ScalarField ScalarField::max_coord(std::size_t dim, std::optional<Box> box) {
  if (dim == 0) throw Error(ErrorCode::InvalidParameter, "max_coord needs dim >= 1");
  return ScalarField(FieldKind::max_coord, MaxCoordParams{}, box_or_default(std::move(box), dim), 1.0);
}

ScalarField ScalarField::relu_net(ReluNetSpec net, std::optional<Box> box) {
  if (auto problems = net.shape_problems(); !problems.empty()) throw SpecParseError(std::move(problems));
  const std::size_t dim = net.input_dim();
  const double k = net.lipschitz_bound();
  return ScalarField(FieldKind::relu_net, std::move(net), box_or_default(std::move(box), dim), k);
}

ScalarField ScalarField::witness(std::size_t dim, std::size_t i, std::size_t j, double alpha, double beta,
                                 std::optional<Box> box) {
  require_pair(dim, i, j);
  if (!(alpha < beta)) {
    std::ostringstream msg;
    msg << "witness breakpoints need alpha < beta, got alpha=" << alpha << " beta=" << beta;
    throw Error(ErrorCode::InvalidBreakpoints, msg.str());
  }
  Box b = box_or_default(std::move(box), dim);
  return ScalarField(FieldKind::witness, WitnessParams{i, j, alpha, beta}, std::move(b),
                     (beta - alpha) * std::sqrt(2.0));
}

ScalarField ScalarField::cantor(int depth) {
  if (depth < 1) throw Error(ErrorCode::InvalidParameter, "cantor depth must be >= 1");
  // The staircase is not Lipschitz in the limit, so no bound is declared.
  return ScalarField(FieldKind::cantor_1d, CantorParams{depth}, Box::uniform(1, 0.0, 1.0), std::nullopt);
}

std::optional<std::pair<std::size_t, std::size_t>> ScalarField::symmetric_pair() const {
  return std::visit(
      overloaded{
          [](const BilinearParams &p) -> std::optional<std::pair<std::size_t, std::size_t>> {
            return std::pair{p.i, p.j};
          },
          [](const WitnessParams &p) -> std::optional<std::pair<std::size_t, std::size_t>> {
            return std::pair{p.i, p.j};
          },
          [this](const MaxCoordParams &) -> std::optional<std::pair<std::size_t, std::size_t>> {
            if (dim() < 2) return std::nullopt;
            return std::pair<std::size_t, std::size_t>{0, 1};
          },
          [](const auto &) -> std::optional<std::pair<std::size_t, std::size_t>> { return std::nullopt; },
      },
      params_);
}

void ScalarField::require_inside(std::span<const double> x) const {
  if (x.size() != dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "point has " + std::to_string(x.size()) + " coordinates, field expects " + std::to_string(dim()));
  }
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] >= domain_.lo[k] && x[k] <= domain_.hi[k])) {
      std::ostringstream msg;
      msg << "coordinate " << k << " = " << x[k] << " outside [" << domain_.lo[k] << ", " << domain_.hi[k] << "]";
      throw Error(ErrorCode::OutOfDomain, msg.str());
    }
  }
}

double ScalarField::evaluate(std::span<const double> x) const {
  require_inside(x);
  return std::visit(
      overloaded{
          [&](const LinearParams &p) {
            double acc = p.offset;
            for (std::size_t k = 0; k < x.size(); ++k) acc += p.coefficients[k] * x[k];
            return acc;
          },
          [&](const BilinearParams &p) { return x[p.i] * x[p.j]; },
          [&](const MaxCoordParams &) { return *std::max_element(x.begin(), x.end()); },
          [&](const ReluNetSpec &net) { return run_relu_net(net, x, false).value; },
          [&](const WitnessParams &p) {
            return witness_ramp(x[p.i], p.alpha, p.beta) * witness_ramp(x[p.j], p.alpha, p.beta);
          },
          [&](const CantorParams &p) { return cantor_value(x[0], p.depth); },
      },
      params_);
}

GradientSample ScalarField::gradient_unchecked(std::span<const double> x) const {
  return std::visit(
      overloaded{
          [&](const LinearParams &p) { return GradientSample{p.coefficients, true}; },
          [&](const BilinearParams &p) {
            GradientSample s{Vec(x.size(), 0.0), true};
            s.gradient[p.i] = x[p.j];
            s.gradient[p.j] = x[p.i];
            return s;
          },
          [&](const MaxCoordParams &) {
            std::size_t best = 0;
            for (std::size_t k = 1; k < x.size(); ++k) {
              if (x[k] > x[best]) best = k;
            }
            GradientSample s{Vec(x.size(), 0.0), true};
            s.gradient[best] = 1.0;
            for (std::size_t k = best + 1; k < x.size(); ++k) {
              if (x[k] == x[best]) s.differentiable = false;
            }
            return s;
          },
          [&](const ReluNetSpec &net) {
            auto r = run_relu_net(net, x, true);
            return GradientSample{std::move(r.gradient), r.differentiable};
          },
          [&](const WitnessParams &p) {
            auto slope = [&](double v) { return (v > p.alpha && v < p.beta) ? 1.0 : 0.0; };
            auto corner = [&](double v) { return v == p.alpha || v == p.beta; };
            GradientSample s{Vec(x.size(), 0.0), !(corner(x[p.i]) || corner(x[p.j]))};
            s.gradient[p.i] = slope(x[p.i]) * witness_ramp(x[p.j], p.alpha, p.beta);
            s.gradient[p.j] = slope(x[p.j]) * witness_ramp(x[p.i], p.alpha, p.beta);
            return s;
          },
          [&](const CantorParams &p) {
            return GradientSample{Vec{0.0}, cantor_point(x[0], p.depth).on_plateau};
          },
      },
      params_);
}

GradientSample ScalarField::gradient_sample(std::span<const double> x) const {
  require_inside(x);
  return gradient_unchecked(x);
}

Vec ScalarField::gradient(std::span<const double> x) const { return gradient_sample(x).gradient; }

bool ScalarField::is_differentiable_at(std::span<const double> x) const {
  require_inside(x);
  switch (kind_) {
    case FieldKind::linear:
    case FieldKind::bilinear_product:
      return true;
    case FieldKind::cantor_1d:
      return cantor_point(x[0], std::get<CantorParams>(params_).depth).on_plateau;
    default:
      return gradient_unchecked(x).differentiable;
  }
}

std::vector<std::int64_t> ScalarField::region_signature(std::span<const double> x) const {
  require_inside(x);
  return std::visit(
      overloaded{
          [&](const MaxCoordParams &) {
            std::size_t best = 0;
            for (std::size_t k = 1; k < x.size(); ++k) {
              if (x[k] > x[best]) best = k;
            }
            return std::vector<std::int64_t>{static_cast<std::int64_t>(best)};
          },
          [&](const ReluNetSpec &net) { return relu_net_pattern(net, x); },
          [&](const WitnessParams &p) {
            return std::vector<std::int64_t>{ramp_region(x[p.i], p.alpha, p.beta),
                                             ramp_region(x[p.j], p.alpha, p.beta)};
          },
          [&](const CantorParams &p) {
            auto pt = cantor_point(x[0], p.depth);
            if (pt.on_plateau) return std::vector<std::int64_t>{1, pt.plateau_code};
            // Unresolved cell index at the truncation depth.
            const long double cells = std::pow(3.0L, p.depth);
            return std::vector<std::int64_t>{0, static_cast<std::int64_t>(std::floor(x[0] * cells))};
          },
          [](const auto &) { return std::vector<std::int64_t>{}; },
      },
      params_);
}

Vec finite_diff_gradient(const ScalarField &field, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidStep, "finite-difference step must be positive");
  Vec probe(x.begin(), x.end());
  Vec out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    // Divide by the step actually taken after rounding x +- h.
    const double hi = x[k] + h;
    const double lo = x[k] - h;
    probe[k] = hi;
    const double up = field.evaluate(probe);
    probe[k] = lo;
    const double down = field.evaluate(probe);
    probe[k] = x[k];
    out[k] = (up - down) / (hi - lo);
  }
  return out;
}

}  // namespace pathgrad
