// pathgrad: path-integral attribution experiments from the command line.
//
//   pathgrad figure --arc-exponent 2 --nodes 64
//   pathgrad check-symmetry --field product --path straight --p 0,0 --q 1,1 --tolerance 1e-9
//   pathgrad check-completeness --field cantor --depth 24 --nodes 1024
//
// Exit status: 0 success, 1 usage or spec error, 2 a checked invariant failed.

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "pathgrad/experiments.hpp"

using namespace pathgrad;

namespace {

struct Options {
  std::string field = "product";
  std::string path = "straight";
  std::string p;
  std::string q;
  std::string rule;
  std::size_t nodes = 0;
  std::size_t max_nodes = 65536;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  int depth = kDefaultCantorDepth;
  std::vector<std::size_t> layers;
  double arc_exponent = 2.0;
  std::size_t i = 0;
  std::size_t j = 1;
  std::size_t samples = 101;
  bool no_split = false;
  std::string out;
  std::string format = "json";
  std::string spec_file;
};

void add_common(CLI::App *cmd, Options &o) {
  cmd->add_option("--field", o.field, "product | max | linear | cantor | relu | JSON file | inline JSON");
  cmd->add_option("--path", o.path, "straight | counterexample | power_arc | JSON file | inline JSON");
  cmd->add_option("--p", o.p, "baseline point, comma separated");
  cmd->add_option("--q", o.q, "input point, comma separated");
  cmd->add_option("--rule", o.rule, "midpoint | trapezoid | gauss")
      ->check(CLI::IsMember({"midpoint", "trapezoid", "gauss", "gauss_legendre"}));
  cmd->add_option("--nodes", o.nodes, "quadrature nodes per panel")->check(CLI::PositiveNumber);
  cmd->add_option("--max-nodes", o.max_nodes, "refinement cap per panel")->check(CLI::PositiveNumber);
  cmd->add_option("--tolerance", o.tolerance, "invariant tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "seed for random relu nets (MT19937-64)");
  cmd->add_option("--dim", o.dim, "field dimension for catalog fields")->check(CLI::PositiveNumber);
  cmd->add_option("--depth", o.depth, "Cantor truncation depth")->check(CLI::PositiveNumber);
  cmd->add_option("--layers", o.layers, "relu layer widths, input first")->delimiter(',');
  cmd->add_option("--arc-exponent", o.arc_exponent, "exponent k of the (t, t^k) arc");
  cmd->add_option("--i", o.i, "first coordinate (0-based)");
  cmd->add_option("--j", o.j, "second coordinate (0-based)");
  cmd->add_option("--samples", o.samples, "rows in the figure table")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-split", o.no_split, "do not split panels at kink crossings");
  cmd->add_option("--out", o.out, "output file (default stdout)");
  cmd->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Path-integral gradient attribution experiments"};
  app.require_subcommand(1);
  Options o;

  const std::map<std::string, std::string> about{
      {"attribute", "integrated gradients of a field along a path"},
      {"check-completeness", "refine until the attributions sum to F(q) - F(p); exit 2 if they do not"},
      {"check-symmetry", "attributions of the coordinates --i and --j agree; exit 2 if they do not"},
      {"witness", "build the symmetric field that separates a monotone path from the diagonal"},
      {"counterexample", "monotonicity of the quadratic counterexample path from --p to --q"},
      {"figure", "the product field on the (t, t^k) arc: IG values and the curve as a table"},
      {"validate", "check a field or path spec and print it normalized"},
  };
  const std::map<std::string, Command> commands{
      {"attribute", Command::attribute},       {"check-completeness", Command::check_completeness},
      {"check-symmetry", Command::check_symmetry}, {"witness", Command::witness},
      {"counterexample", Command::counterexample}, {"figure", Command::figure},
      {"validate", Command::validate},
  };
  std::map<std::string, CLI::App *> subs;
  for (const auto &[name, cmd] : commands) {
    auto *sub = app.add_subcommand(name, about.at(name));
    add_common(sub, o);
    if (cmd == Command::validate) sub->add_option("spec", o.spec_file, "field or path spec JSON")->required();
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  ExperimentConfig config;
  for (const auto &[name, sub] : subs) {
    if (sub->parsed()) config.command = commands.at(name);
  }
  auto given = [&](const char *flag) {
    for (const auto &[name, sub] : subs) {
      if (sub->parsed() && sub->count(flag) > 0) return true;
    }
    return false;
  };

  try {
    config.field = o.field;
    config.path = o.path;
    if (!o.p.empty()) config.p = parse_point(o.p);
    if (!o.q.empty()) config.q = parse_point(o.q);
    if (!o.rule.empty()) config.rule = rule_from_string(o.rule);
    if (given("--nodes")) config.nodes = o.nodes;
    config.max_nodes = o.max_nodes;
    config.tolerance = o.tolerance;
    if (given("--seed")) config.seed = o.seed;
    if (given("--dim")) config.dim = o.dim;
    config.depth = o.depth;
    config.layers = o.layers;
    config.arc_exponent = o.arc_exponent;
    config.i = o.i;
    config.j = o.j;
    config.samples = o.samples;
    config.split_kinks = !o.no_split;
    config.format = o.format == "csv" ? OutputFormat::csv : OutputFormat::json;
    config.spec_file = o.spec_file;
  } catch (const std::exception &e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  const RunResult result = run(config);
  if (!result.message.empty()) std::cerr << result.message << "\n";
  if (!result.output.empty()) {
    if (o.out.empty()) {
      std::cout << result.output;
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file) {
        std::cerr << "cannot write " << o.out << "\n";
        return kExitUsage;
      }
      file << result.output;
    }
  }
  return result.exit_code;
}
