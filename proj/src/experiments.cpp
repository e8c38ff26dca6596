#include "pathgrad/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string_view>

#include "pathgrad/errors.hpp"
#include "pathgrad/witness.hpp"

namespace pathgrad {

namespace {

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level() {
  const char *env = std::getenv("PATHGRAD_LOG");
  if (env == nullptr) return LogLevel::quiet;
  const std::string_view v(env);
  if (v == "debug" || v == "2") return LogLevel::debug;
  if (v == "info" || v == "1") return LogLevel::info;
  return LogLevel::quiet;
}

void log(LogLevel level, const std::string &msg) {
  if (static_cast<int>(log_level()) >= static_cast<int>(level)) std::fprintf(stderr, "[pathgrad] %s\n", msg.c_str());
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

ScalarField resolve_field(const ExperimentConfig &config) {
  const std::string &name = config.field;
  const std::size_t dim = config.dim.value_or(2);
  if (name == "product" || name == "bilinear_product") return ScalarField::bilinear_product(dim);
  if (name == "max" || name == "max_coord") return ScalarField::max_coord(dim);
  if (name == "linear") return ScalarField::linear(Vec(dim, 1.0));
  if (name == "cantor" || name == "cantor_1d") return ScalarField::cantor(config.depth);
  if (name == "relu" || name == "relu_net" || name == "random_relu") {
    if (!config.seed) throw SpecParseError({"random relu field needs --seed"});
    std::vector<std::size_t> layers = config.layers;
    if (layers.empty()) layers = {dim, 16, 16, 1};
    if (config.dim && layers.front() != *config.dim) throw SpecParseError({"--layers disagrees with --dim"});
    json spec{{"random_relu", {{"layers", layers}, {"seed", *config.seed}}}};
    return field_from_json(spec).set_id("random_relu_seed_" + std::to_string(*config.seed));
  }
  return field_from_json(load_json_argument(name));
}

PathSpec resolve_path(const ExperimentConfig &config, std::size_t dim) {
  const std::string &name = config.path;
  const Vec p = config.p.value_or(Vec(dim, 0.0));
  const Vec q = config.q.value_or(Vec(dim, 1.0));
  if (name == "straight") return make_straight(p, q);
  if (name == "counterexample" || name == "counterexample_quadratic") return make_counterexample(p, q);
  if (name == "power_arc" || name == "power") {
    if (!config.p && !config.q) return make_power_arc(config.arc_exponent);
    Vec exps(p.size(), config.arc_exponent);
    exps[0] = 1.0;
    return make_power_path(p, q, exps);
  }
  return path_from_json(load_json_argument(name));
}

QuadratureSpec quadrature_for(const ExperimentConfig &config, Rule rule, std::size_t nodes) {
  return QuadratureSpec{config.rule.value_or(rule), config.nodes.value_or(nodes), {}};
}

Vec splits_for(const ExperimentConfig &config, const ScalarField &field, const PathSpec &path) {
  if (!config.split_kinks) return {};
  Vec kinks = kink_crossings(field, path);
  if (!kinks.empty()) log(LogLevel::info, "splitting panels at " + std::to_string(kinks.size()) + " kink crossings");
  return kinks;
}

json history_to_json(const RefineResult &r) {
  json h = json::array();
  for (const auto &[n, res] : r.history) h.push_back({{"nodes", n}, {"residual", res}});
  return h;
}

RunResult emit(const ExperimentConfig &config, const json &body, const std::string &csv, int code,
               std::string message = {}) {
  RunResult out;
  out.exit_code = code;
  out.output = config.format == OutputFormat::csv ? csv : dump(body);
  out.message = std::move(message);
  return out;
}

RunResult run_attribute(const ExperimentConfig &config) {
  const ScalarField field = resolve_field(config);
  const PathSpec path = resolve_path(config, field.dim());
  QuadratureSpec quad = quadrature_for(config, Rule::midpoint, 64);
  quad.split_at = splits_for(config, field, path);
  const auto report = integrated_gradients(field, path, quad);
  return emit(config, report_to_json(report), report_to_csv(report), kExitOk);
}

RunResult run_check_completeness(const ExperimentConfig &config) {
  const ScalarField field = resolve_field(config);
  const PathSpec path = resolve_path(config, field.dim());
  const Vec splits = splits_for(config, field, path);

  AttributionReport report;
  json check{{"tolerance", config.tolerance}};
  if (config.nodes) {
    QuadratureSpec quad = quadrature_for(config, Rule::midpoint, *config.nodes);
    quad.split_at = splits;
    report = integrated_gradients(field, path, quad);
  } else {
    const auto refined = refine(field, path, config.tolerance, config.max_nodes, splits);
    report = refined.report;
    check["history"] = history_to_json(refined);
  }
  const double residual = completeness_residual(report);
  const bool passed = residual <= config.tolerance;
  check["residual_abs"] = residual;
  check["passed"] = passed;
  json body = report_to_json(report);
  body["check"] = std::move(check);
  std::ostringstream msg;
  if (!passed) msg << "completeness residual " << residual << " exceeds tolerance " << config.tolerance;
  return emit(config, body, report_to_csv(report), passed ? kExitOk : kExitInvariant, msg.str());
}

RunResult run_check_symmetry(const ExperimentConfig &config) {
  const ScalarField field = resolve_field(config);
  const PathSpec path = resolve_path(config, field.dim());
  QuadratureSpec quad = quadrature_for(config, Rule::midpoint, 64);
  quad.split_at = splits_for(config, field, path);
  const auto report = integrated_gradients(field, path, quad);
  const double gap = symmetry_gap(report, config.i, config.j);
  const bool passed = std::abs(gap) <= config.tolerance;
  json body = report_to_json(report);
  body["check"] = {{"i", config.i}, {"j", config.j}, {"gap", gap}, {"tolerance", config.tolerance}, {"passed", passed}};
  std::ostringstream msg;
  if (!passed) msg << "symmetry gap " << gap << " exceeds tolerance " << config.tolerance;
  return emit(config, body, report_to_csv(report), passed ? kExitOk : kExitInvariant, msg.str());
}

RunResult run_witness(const ExperimentConfig &config) {
  const PathSpec path = resolve_path(config, config.dim.value_or(2));
  const QuadratureSpec quad = quadrature_for(config, Rule::gauss_legendre, 32);
  try {
    const auto result = demonstrate_asymmetry(path, config.i, config.j, quad);
    const bool passed = result.gap > 10.0 * config.tolerance;
    json body = asymmetry_to_json(result);
    body["status"] = "violation";
    body["passed"] = passed;
    std::ostringstream msg;
    if (!passed) msg << "witness gap " << result.gap << " not above " << 10.0 * config.tolerance;
    return emit(config, body, report_to_csv(result.attribution), passed ? kExitOk : kExitInvariant, msg.str());
  } catch (const Error &e) {
    if (e.code() != ErrorCode::NoViolation) throw;
    json body{{"status", "no_violation"}, {"message", e.what()}};
    return emit(config, body, "status\nno_violation\n", kExitOk);
  }
}

RunResult run_counterexample(const ExperimentConfig &config) {
  if (!config.p || !config.q) throw SpecParseError({"counterexample needs --p and --q"});
  const Vec &p = *config.p;
  const Vec &q = *config.q;
  const PathSpec path = make_counterexample(p, q);
  const PathSpec line = make_straight(p, q);
  const double c = std::get<CounterexampleParams>(path.params()).c;

  const std::size_t grid = 1001;
  double deviation = 0.0;
  for (std::size_t k = 0; k < grid; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(grid - 1);
    const Vec a = path.eval(t);
    const Vec b = line.eval(t);
    for (std::size_t i = 0; i < a.size(); ++i) deviation = std::max(deviation, std::abs(a[i] - b[i]));
  }

  const auto mono = check_monotonic(path);
  bool consistent = true;
  json coords = json::array();
  for (std::size_t i = 0; i < 2; ++i) {
    const double delta = q[i] - p[i];
    const bool predicate = c <= std::abs(delta);
    const bool monotonic = mono.monotonic(i);
    if (predicate != monotonic && delta != 0.0) consistent = false;
    coords.push_back({{"coordinate", i},
                      {"direction", std::string(to_string(mono.direction[i]))},
                      {"strict", static_cast<bool>(mono.strict[i])},
                      {"c_le_abs_delta", predicate}});
  }
  const bool symmetric_endpoints = p[0] == p[1] && q[0] == q[1];
  if (symmetric_endpoints && deviation != 0.0) consistent = false;

  const ScalarField field = resolve_field(config);
  const auto report = integrated_gradients(field, path, quadrature_for(config, Rule::gauss_legendre, 32));

  json body{{"path", path_to_json(path)},
            {"c", c},
            {"straight_deviation", deviation},
            {"symmetric_endpoints", symmetric_endpoints},
            {"monotonicity", coords},
            {"report", report_to_json(report)},
            {"passed", consistent}};
  std::ostringstream csv;
  csv << "coordinate,direction,strict,c_le_abs_delta\n";
  for (const auto &row : coords) {
    csv << row["coordinate"].get<std::size_t>() << "," << row["direction"].get<std::string>() << ","
        << (row["strict"].get<bool>() ? "true" : "false") << "," << (row["c_le_abs_delta"].get<bool>() ? "true" : "false")
        << "\n";
  }
  return emit(config, body, csv.str(), consistent ? kExitOk : kExitInvariant,
              consistent ? "" : "counterexample path violates its monotonicity or reduction property");
}

RunResult run_figure(const ExperimentConfig &config) {
  const PathSpec path = make_power_arc(config.arc_exponent);
  const ScalarField field = ScalarField::bilinear_product();
  const auto report = integrated_gradients(field, path, quadrature_for(config, Rule::gauss_legendre, 64));

  const std::size_t samples = std::max<std::size_t>(config.samples, 2);
  Vec ts, g1, g2;
  std::string csv = "# IG1=" + format_real(report.attributions[0]) + " (area under the curve)\n" +
                    "# IG2=" + format_real(report.attributions[1]) + " (area above the curve)\n" +
                    "# sum=" + format_real(report.sum) + "\nt,gamma1,gamma2\n";
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(samples - 1);
    const Vec x = path.eval(t);
    ts.push_back(t);
    g1.push_back(x[0]);
    g2.push_back(x[1]);
    csv += format_real(t) + "," + format_real(x[0]) + "," + format_real(x[1]) + "\n";
  }
  json body{{"arc_exponent", config.arc_exponent},
            {"table", {{"t", ts}, {"gamma1", g1}, {"gamma2", g2}}},
            {"attributions", report.attributions},
            {"sum", report.sum},
            {"report", report_to_json(report)}};
  return emit(config, body, csv, kExitOk);
}

RunResult run_validate(const ExperimentConfig &config) {
  if (config.spec_file.empty()) throw SpecParseError({"validate needs a spec file"});
  const auto spec = validate_spec_file(config.spec_file);
  RunResult out;
  out.output = dump(spec.normalized);
  return out;
}

RunResult error_result(int code, const json &body) {
  RunResult out;
  out.exit_code = code;
  out.message = body.dump();
  return out;
}

}  // namespace

Vec parse_point(const std::string &text) {
  Vec out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception &) {
      throw SpecParseError({"cannot parse \"" + item + "\" as a number in point \"" + text + "\""});
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw SpecParseError({"trailing characters in \"" + item + "\""});
    }
    out.push_back(v);
  }
  if (out.empty()) throw SpecParseError({"empty point \"" + text + "\""});
  return out;
}

RunResult run(const ExperimentConfig &config) {
  try {
    if (!(config.tolerance > 0.0)) throw SpecParseError({"--tolerance must be positive"});
    switch (config.command) {
      case Command::attribute: return run_attribute(config);
      case Command::check_completeness: return run_check_completeness(config);
      case Command::check_symmetry: return run_check_symmetry(config);
      case Command::witness: return run_witness(config);
      case Command::counterexample: return run_counterexample(config);
      case Command::figure: return run_figure(config);
      case Command::validate: return run_validate(config);
    }
  } catch (const SpecParseError &e) {
    return error_result(kExitUsage, {{"error", "SpecParseError"}, {"problems", e.problems()}});
  } catch (const NotConvergedError &e) {
    return error_result(kExitInvariant, {{"error", "NotConverged"}, {"report", report_to_json(e.report())}});
  } catch (const PathLeavesDomainError &e) {
    return error_result(kExitUsage, {{"error", "PathLeavesDomain"}, {"t", e.parameter()}, {"message", e.what()}});
  } catch (const Error &e) {
    return error_result(kExitUsage, {{"error", std::string(to_string(e.code()))}, {"message", e.what()}});
  } catch (const std::exception &e) {
    return error_result(kExitUsage, {{"error", "Internal"}, {"message", e.what()}});
  }
  return error_result(kExitUsage, {{"error", "UnknownCommand"}});
}

}  // namespace pathgrad
