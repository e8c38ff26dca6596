#include "pathgrad/spec_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "pathgrad/errors.hpp"

namespace pathgrad {

namespace {

using Problems = std::vector<std::string>;

std::optional<double> read_number(const json &obj, const char *key, const std::string &where, Problems &problems,
                                  std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (!fallback) problems.push_back(where + ": missing \"" + key + "\"");
    return fallback;
  }
  const json &v = obj.at(key);
  if (!v.is_number()) {
    problems.push_back(where + ": \"" + key + "\" must be a number");
    return std::nullopt;
  }
  return v.get<double>();
}

std::optional<std::size_t> read_index(const json &obj, const char *key, const std::string &where,
                                      Problems &problems, std::optional<std::size_t> fallback) {
  if (!obj.contains(key)) {
    if (!fallback) problems.push_back(where + ": missing \"" + key + "\"");
    return fallback;
  }
  const json &v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    problems.push_back(where + ": \"" + key + "\" must be a non-negative integer");
    return std::nullopt;
  }
  return v.get<std::size_t>();
}

std::optional<Vec> read_vector(const json &v, const std::string &where, Problems &problems) {
  if (!v.is_array()) {
    problems.push_back(where + " must be an array of numbers");
    return std::nullopt;
  }
  Vec out;
  out.reserve(v.size());
  for (const auto &e : v) {
    if (!e.is_number()) {
      problems.push_back(where + " must contain only numbers");
      return std::nullopt;
    }
    out.push_back(e.get<double>());
  }
  return out;
}

std::optional<std::vector<Vec>> read_points(const json &v, const std::string &where, Problems &problems) {
  if (!v.is_array()) {
    problems.push_back(where + " must be an array of points");
    return std::nullopt;
  }
  std::vector<Vec> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    auto p = read_vector(v[k], where + "[" + std::to_string(k) + "]", problems);
    if (!p) return std::nullopt;
    out.push_back(std::move(*p));
  }
  return out;
}

const json &params_of(const json &spec, Problems &problems) {
  static const json empty = json::object();
  if (!spec.contains("params")) return empty;
  const json &p = spec.at("params");
  if (!p.is_object()) {
    problems.emplace_back("\"params\" must be an object");
    return empty;
  }
  return p;
}

std::optional<Box> read_domain(const json &spec, std::size_t dim, Problems &problems) {
  if (!spec.contains("domain")) return std::nullopt;
  const json &d = spec.at("domain");
  if (d.is_array()) {
    auto v = read_vector(d, "domain", problems);
    if (!v) return std::nullopt;
    if (v->size() != 2) {
      problems.emplace_back("domain must be [lo, hi]");
      return std::nullopt;
    }
    if (!((*v)[0] <= (*v)[1])) {
      problems.emplace_back("domain needs lo <= hi");
      return std::nullopt;
    }
    return Box::uniform(dim, (*v)[0], (*v)[1]);
  }
  if (d.is_object() && d.contains("lo") && d.contains("hi")) {
    auto lo = read_vector(d.at("lo"), "domain.lo", problems);
    auto hi = read_vector(d.at("hi"), "domain.hi", problems);
    if (!lo || !hi) return std::nullopt;
    if (lo->size() != dim || hi->size() != dim) {
      problems.push_back("domain bounds must have " + std::to_string(dim) + " entries");
      return std::nullopt;
    }
    return Box{*lo, *hi};
  }
  problems.emplace_back("domain must be [lo, hi] or {\"lo\": [...], \"hi\": [...]}");
  return std::nullopt;
}

std::optional<std::size_t> read_dim(const json &spec, Problems &problems, std::optional<std::size_t> fallback) {
  auto dim = read_index(spec, "dim", "field", problems, fallback);
  if (dim && *dim == 0) {
    problems.emplace_back("field: \"dim\" must be positive");
    return std::nullopt;
  }
  return dim;
}

std::optional<Activation> read_activation(const json &obj, Problems &problems) {
  if (!obj.contains("activation")) return Activation::relu;
  const json &a = obj.at("activation");
  if (a == "relu") return Activation::relu;
  if (a == "max_pool_final") return Activation::max_pool_final;
  problems.emplace_back("activation must be \"relu\" or \"max_pool_final\"");
  return std::nullopt;
}

std::string_view activation_name(Activation a) { return a == Activation::relu ? "relu" : "max_pool_final"; }

[[noreturn]] void fail(Problems problems) { throw SpecParseError(std::move(problems)); }

template <class Build>
auto construct(Problems &problems, Build &&build) -> decltype(build()) {
  if (!problems.empty()) fail(std::move(problems));
  try {
    return build();
  } catch (const SpecParseError &e) {
    problems.insert(problems.end(), e.problems().begin(), e.problems().end());
  } catch (const Error &e) {
    problems.emplace_back(e.what());
  }
  fail(std::move(problems));
}

void reject_unknown_keys(const json &spec, std::initializer_list<std::string_view> allowed, const char *what,
                         Problems &problems) {
  for (const auto &[key, value] : spec.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      problems.push_back(std::string(what) + ": unknown key \"" + key + "\"");
    }
  }
}

void apply_id(const json &spec, std::string &id_out, bool &has_id, Problems &problems) {
  has_id = spec.contains("id");
  if (!has_id) return;
  if (!spec.at("id").is_string()) {
    problems.emplace_back("\"id\" must be a string");
    return;
  }
  id_out = spec.at("id").get<std::string>();
}

json domain_to_json(const Box &box) {
  const bool uniform = std::all_of(box.lo.begin(), box.lo.end(), [&](double v) { return v == box.lo[0]; }) &&
                       std::all_of(box.hi.begin(), box.hi.end(), [&](double v) { return v == box.hi[0]; });
  if (uniform) return json::array({box.lo[0], box.hi[0]});
  return json{{"lo", box.lo}, {"hi", box.hi}};
}

std::optional<ReluNetSpec> read_relu_params(const json &params, Problems &problems) {
  auto activation = read_activation(params, problems);
  if (!params.contains("weights") || !params.contains("biases")) {
    problems.emplace_back("relu_net params need \"weights\" and \"biases\"");
    return std::nullopt;
  }
  const json &weights = params.at("weights");
  const json &biases = params.at("biases");
  if (!weights.is_array() || !biases.is_array()) {
    problems.emplace_back("relu_net \"weights\" and \"biases\" must be arrays (one entry per layer)");
    return std::nullopt;
  }
  if (weights.size() != biases.size()) {
    problems.push_back("relu_net has " + std::to_string(weights.size()) + " weight matrices but " +
                       std::to_string(biases.size()) + " bias vectors");
  }
  ReluNetSpec net;
  const std::size_t layers = std::min(weights.size(), biases.size());
  for (std::size_t l = 0; l < layers; ++l) {
    const std::string where = "layer " + std::to_string(l);
    DenseLayer layer;
    auto rows = read_points(weights[l], where + " weights", problems);
    auto bias = read_vector(biases[l], where + " bias", problems);
    if (!rows || !bias) continue;
    layer.outputs = rows->size();
    layer.inputs = rows->empty() ? 0 : rows->front().size();
    for (std::size_t r = 0; r < rows->size(); ++r) {
      if ((*rows)[r].size() != layer.inputs) {
        problems.push_back(where + ": row " + std::to_string(r) + " has " + std::to_string((*rows)[r].size()) +
                           " entries, expected " + std::to_string(layer.inputs));
      }
      layer.weights.insert(layer.weights.end(), (*rows)[r].begin(), (*rows)[r].end());
    }
    layer.bias = *bias;
    net.layers.push_back(std::move(layer));
  }
  if (activation) net.activation = *activation;
  if (problems.empty()) {
    auto shape = net.shape_problems();
    problems.insert(problems.end(), shape.begin(), shape.end());
  }
  return net;
}

struct RandomReluSpec {
  std::vector<std::size_t> layers;
  std::uint64_t seed = 0;
  Activation activation = Activation::relu;
};

std::optional<RandomReluSpec> read_random_relu(const json &spec, Problems &problems) {
  const json &r = spec.at("random_relu");
  if (!r.is_object()) {
    problems.emplace_back("\"random_relu\" must be an object");
    return std::nullopt;
  }
  RandomReluSpec out;
  if (!r.contains("layers") || !r.at("layers").is_array() || r.at("layers").size() < 2) {
    problems.emplace_back("random_relu.layers must list at least input and output widths");
  } else {
    for (const auto &w : r.at("layers")) {
      if (!w.is_number_integer() || w.get<long long>() <= 0) {
        problems.emplace_back("random_relu.layers must be positive integers");
        break;
      }
      out.layers.push_back(w.get<std::size_t>());
    }
  }
  if (!r.contains("seed") || !(r.at("seed").is_number_unsigned() || (r.at("seed").is_number_integer() && r.at("seed").get<long long>() >= 0))) {
    problems.emplace_back("random_relu.seed must be an unsigned 64-bit integer");
  } else {
    out.seed = r.at("seed").get<std::uint64_t>();
  }
  if (auto a = read_activation(r, problems)) out.activation = *a;
  if (out.activation == Activation::relu && !out.layers.empty() && out.layers.back() != 1) {
    problems.emplace_back("random_relu with relu activation needs output width 1");
  }
  if (!problems.empty()) return std::nullopt;
  return out;
}

}  // namespace

ScalarField field_from_json(const json &spec) {
  Problems problems;
  if (!spec.is_object()) fail({"field spec must be a JSON object"});
  std::string id;
  bool has_id = false;
  apply_id(spec, id, has_id, problems);

  auto finish = [&](ScalarField f) {
    if (has_id) f.set_id(id);
    return f;
  };

  if (spec.contains("random_relu")) {
    reject_unknown_keys(spec, {"random_relu", "kind", "dim", "domain", "id"}, "field", problems);
    auto r = read_random_relu(spec, problems);
    const std::size_t dim = r ? r->layers.front() : 1;
    if (spec.contains("dim") && (!spec.at("dim").is_number_integer() || spec.at("dim").get<long long>() != static_cast<long long>(dim))) {
      problems.emplace_back("field: \"dim\" disagrees with random_relu.layers[0]");
    }
    auto box = read_domain(spec, dim, problems);
    return finish(construct(problems, [&] {
      return ScalarField::relu_net(random_relu_net(r->layers, r->seed, r->activation), box);
    }));
  }

  if (!spec.contains("kind") || !spec.at("kind").is_string()) fail({"field spec needs a string \"kind\""});
  const auto kind_name = spec.at("kind").get<std::string>();
  const auto kind = field_kind_from_string(kind_name);
  if (!kind) fail({"unknown field kind \"" + kind_name + "\""});
  reject_unknown_keys(spec, {"kind", "dim", "domain", "params", "id"}, "field", problems);
  const json &params = params_of(spec, problems);

  switch (*kind) {
    case FieldKind::linear: {
      std::optional<Vec> coeffs;
      if (!params.contains("coefficients")) {
        problems.emplace_back("linear: missing params.coefficients");
      } else {
        coeffs = read_vector(params.at("coefficients"), "linear: params.coefficients", problems);
      }
      auto offset = read_number(params, "offset", "linear", problems, 0.0);
      const std::size_t n = coeffs ? coeffs->size() : 1;
      auto dim = read_dim(spec, problems, n);
      if (dim && coeffs && *dim != coeffs->size()) problems.emplace_back("linear: dim disagrees with coefficients");
      auto box = read_domain(spec, n, problems);
      return finish(construct(problems, [&] { return ScalarField::linear(*coeffs, *offset, box); }));
    }
    case FieldKind::bilinear_product: {
      auto dim = read_dim(spec, problems, 2);
      auto i = read_index(params, "i", "bilinear_product", problems, 0);
      auto j = read_index(params, "j", "bilinear_product", problems, 1);
      auto box = read_domain(spec, dim.value_or(2), problems);
      return finish(construct(problems, [&] { return ScalarField::bilinear_product(*dim, *i, *j, box); }));
    }
    case FieldKind::max_coord: {
      auto dim = read_dim(spec, problems, 2);
      auto box = read_domain(spec, dim.value_or(2), problems);
      return finish(construct(problems, [&] { return ScalarField::max_coord(*dim, box); }));
    }
    case FieldKind::relu_net: {
      auto net = read_relu_params(params, problems);
      const std::size_t n = net && !net->layers.empty() ? net->input_dim() : 1;
      if (spec.contains("dim")) {
        auto dim = read_dim(spec, problems, std::nullopt);
        if (dim && *dim != n) problems.emplace_back("relu_net: dim disagrees with the first weight matrix");
      }
      auto box = read_domain(spec, n, problems);
      return finish(construct(problems, [&] { return ScalarField::relu_net(*net, box); }));
    }
    case FieldKind::witness: {
      auto dim = read_dim(spec, problems, 2);
      auto i = read_index(params, "i", "witness", problems, 0);
      auto j = read_index(params, "j", "witness", problems, 1);
      auto alpha = read_number(params, "alpha", "witness", problems);
      auto beta = read_number(params, "beta", "witness", problems);
      auto box = read_domain(spec, dim.value_or(2), problems);
      return finish(construct(problems, [&] { return ScalarField::witness(*dim, *i, *j, *alpha, *beta, box); }));
    }
    case FieldKind::cantor_1d: {
      auto dim = read_dim(spec, problems, 1);
      if (dim && *dim != 1) problems.emplace_back("cantor_1d: dim must be 1");
      auto depth = read_index(params, "depth", "cantor_1d", problems, static_cast<std::size_t>(kDefaultCantorDepth));
      if (auto box = read_domain(spec, 1, problems); box && !(*box == Box::uniform(1, 0.0, 1.0))) {
        problems.emplace_back("cantor_1d: domain is fixed to [0, 1]");
      }
      return finish(construct(problems, [&] { return ScalarField::cantor(static_cast<int>(*depth)); }));
    }
  }
  fail({"unhandled field kind"});
}

json field_to_json(const ScalarField &field) {
  json out;
  out["kind"] = std::string(to_string(field.kind()));
  out["dim"] = field.dim();
  out["domain"] = domain_to_json(field.domain());
  json params = json::object();
  std::visit(
      [&](const auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, LinearParams>) {
          params["coefficients"] = p.coefficients;
          params["offset"] = p.offset;
        } else if constexpr (std::is_same_v<T, BilinearParams>) {
          params["i"] = p.i;
          params["j"] = p.j;
        } else if constexpr (std::is_same_v<T, ReluNetSpec>) {
          params["activation"] = std::string(activation_name(p.activation));
          json weights = json::array();
          json biases = json::array();
          for (const auto &layer : p.layers) {
            json rows = json::array();
            for (std::size_t r = 0; r < layer.outputs; ++r) {
              rows.push_back(Vec(layer.weights.begin() + static_cast<std::ptrdiff_t>(r * layer.inputs),
                                 layer.weights.begin() + static_cast<std::ptrdiff_t>((r + 1) * layer.inputs)));
            }
            weights.push_back(std::move(rows));
            biases.push_back(layer.bias);
          }
          params["weights"] = std::move(weights);
          params["biases"] = std::move(biases);
        } else if constexpr (std::is_same_v<T, WitnessParams>) {
          params["i"] = p.i;
          params["j"] = p.j;
          params["alpha"] = p.alpha;
          params["beta"] = p.beta;
        } else if constexpr (std::is_same_v<T, CantorParams>) {
          params["depth"] = p.depth;
        }
      },
      field.params());
  out["params"] = std::move(params);
  if (field.id() != to_string(field.kind())) out["id"] = field.id();
  return out;
}

json normalize_field_spec(const json &spec) {
  ScalarField field = field_from_json(spec);
  if (!spec.contains("random_relu")) return field_to_json(field);
  Problems ignored;
  const auto r = *read_random_relu(spec, ignored);
  json out;
  out["kind"] = "relu_net";
  out["dim"] = field.dim();
  out["domain"] = domain_to_json(field.domain());
  out["random_relu"] = {{"layers", r.layers}, {"seed", r.seed}, {"activation", std::string(activation_name(r.activation))}};
  if (spec.contains("id")) out["id"] = spec.at("id");
  return out;
}

PathSpec path_from_json(const json &spec) {
  Problems problems;
  if (!spec.is_object()) fail({"path spec must be a JSON object"});
  std::string id;
  bool has_id = false;
  apply_id(spec, id, has_id, problems);
  if (!spec.contains("kind") || !spec.at("kind").is_string()) fail({"path spec needs a string \"kind\""});
  auto kind_name = spec.at("kind").get<std::string>();
  if (kind_name == "counterexample") kind_name = "counterexample_quadratic";
  const auto kind = path_kind_from_string(kind_name);
  if (!kind) fail({"unknown path kind \"" + kind_name + "\""});
  reject_unknown_keys(spec, {"kind", "p", "q", "params", "id"}, "path", problems);
  const json &params = params_of(spec, problems);

  std::optional<Vec> p;
  std::optional<Vec> q;
  const bool arc_shortcut = *kind == PathKind::power_arc && params.contains("k");
  if (spec.contains("p")) p = read_vector(spec.at("p"), "p", problems);
  if (spec.contains("q")) q = read_vector(spec.at("q"), "q", problems);
  if (!arc_shortcut) {
    if (!spec.contains("p")) problems.emplace_back("path: missing \"p\"");
    if (!spec.contains("q")) problems.emplace_back("path: missing \"q\"");
  }

  auto finish = [&](PathSpec path) {
    if (has_id) path.set_id(id);
    return path;
  };

  switch (*kind) {
    case PathKind::straight:
      return finish(construct(problems, [&] { return make_straight(*p, *q); }));
    case PathKind::counterexample_quadratic:
      return finish(construct(problems, [&] { return make_counterexample(*p, *q); }));
    case PathKind::power_arc: {
      if (arc_shortcut) {
        auto k = read_number(params, "k", "power_arc", problems);
        if (spec.contains("p") || spec.contains("q")) {
          problems.emplace_back("power_arc: give either params.k (unit square arc) or p, q and params.exponents");
        }
        return finish(construct(problems, [&] { return make_power_arc(*k); }));
      }
      std::optional<Vec> exps;
      if (!params.contains("exponents")) {
        problems.emplace_back("power_arc: missing params.exponents");
      } else {
        exps = read_vector(params.at("exponents"), "power_arc: params.exponents", problems);
      }
      return finish(construct(problems, [&] { return make_power_path(*p, *q, *exps); }));
    }
    case PathKind::piecewise_linear:
    case PathKind::monotone_cubic: {
      std::optional<std::vector<Vec>> knots;
      std::optional<Vec> times = Vec{};
      if (!params.contains("knots")) {
        problems.emplace_back(std::string(to_string(*kind)) + ": missing params.knots");
      } else {
        knots = read_points(params.at("knots"), "params.knots", problems);
      }
      if (params.contains("times")) times = read_vector(params.at("times"), "params.times", problems);
      if (*kind == PathKind::piecewise_linear) {
        return finish(construct(problems, [&] { return make_piecewise_linear(*p, *q, *times, *knots); }));
      }
      return finish(construct(problems, [&] { return make_monotone_cubic(*p, *q, *times, *knots); }));
    }
  }
  fail({"unhandled path kind"});
}

json path_to_json(const PathSpec &path) {
  json out;
  out["kind"] = std::string(to_string(path.kind()));
  out["p"] = path.start();
  out["q"] = path.end();
  json params = json::object();
  std::visit(
      [&](const auto &pp) {
        using T = std::decay_t<decltype(pp)>;
        if constexpr (std::is_same_v<T, PowerArcParams>) {
          params["exponents"] = pp.exponents;
        } else if constexpr (std::is_same_v<T, PiecewiseLinearParams> || std::is_same_v<T, MonotoneCubicParams>) {
          params["knots"] = pp.points;
          params["times"] = pp.times;
        }
      },
      path.params());
  out["params"] = std::move(params);
  if (path.id() != to_string(path.kind())) out["id"] = path.id();
  return out;
}

json normalize_path_spec(const json &spec) { return path_to_json(path_from_json(spec)); }

ValidatedSpec validate_spec(const json &spec) {
  if (!spec.is_object()) fail({"spec must be a JSON object"});
  if (spec.contains("random_relu")) return {SpecType::field, normalize_field_spec(spec)};
  if (!spec.contains("kind") || !spec.at("kind").is_string()) fail({"spec needs a string \"kind\""});
  const auto kind = spec.at("kind").get<std::string>();
  if (field_kind_from_string(kind)) return {SpecType::field, normalize_field_spec(spec)};
  if (path_kind_from_string(kind) || kind == "counterexample") return {SpecType::path, normalize_path_spec(spec)};
  fail({"unknown kind \"" + kind + "\""});
}

namespace {

json parse_text(const std::string &text, const std::string &source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    fail({source + ":" + std::to_string(line) + ": " + e.what()});
  }
}

std::string read_file(const std::filesystem::path &file) {
  std::ifstream in(file);
  if (!in) fail({"cannot read " + file.string()});
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

ValidatedSpec validate_spec_file(const std::filesystem::path &file) {
  return validate_spec(parse_text(read_file(file), file.string()));
}

json load_json_argument(const std::string &text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_text(text, "<inline>");
  return parse_text(read_file(text), text);
}

json quadrature_to_json(const QuadratureSpec &quad) {
  json out{{"rule", std::string(to_string(quad.rule))}, {"nodes", quad.nodes}};
  if (!quad.split_at.empty()) out["split_at"] = quad.split_at;
  return out;
}

json report_to_json(const AttributionReport &report) {
  json out;
  out["field"] = report.field_id;
  out["path"] = report.path_id;
  out["quadrature"] = quadrature_to_json(report.quadrature);
  out["attributions"] = report.attributions;
  out["sum"] = report.sum;
  out["f_input"] = report.f_input;
  out["f_base"] = report.f_base;
  out["residual"] = report.residual;
  out["nondiff_nodes"] = report.nondiff_nodes;
  out["total_nodes"] = report.total_nodes;
  out["all_nodes_nondifferentiable"] = report.all_nodes_nondifferentiable;
  out["converged"] = report.converged ? json(*report.converged) : json(nullptr);
  return out;
}

json interval_to_json(const ViolationInterval &interval) {
  return json{{"u", interval.u},
              {"v", interval.v},
              {"alpha", interval.alpha},
              {"beta", interval.beta},
              {"swapped", interval.swapped}};
}

json asymmetry_to_json(const AsymmetryReport &report) {
  return json{{"interval", interval_to_json(report.interval)},
              {"gap", report.gap},
              {"smaller", report.smaller},
              {"larger", report.larger},
              {"orientation", report.orientation},
              {"attributions", report.attribution.attributions},
              {"residual", report.attribution.residual}};
}

std::string format_real(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string report_to_csv(const AttributionReport &report) {
  std::string out = "coordinate,attribution\n";
  for (std::size_t i = 0; i < report.attributions.size(); ++i) {
    out += std::to_string(i) + "," + format_real(report.attributions[i]) + "\n";
  }
  return out;
}

}  // namespace pathgrad
