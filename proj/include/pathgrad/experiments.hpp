#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pathgrad/quadrature.hpp"
#include "pathgrad/spec_io.hpp"

namespace pathgrad {

enum class Command { attribute, check_completeness, check_symmetry, witness, counterexample, figure, validate };
enum class OutputFormat { json, csv };

/// Exit status contract of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvariant = 2;

struct ExperimentConfig {
  Command command = Command::attribute;
  /// Catalog name (product, max, linear, cantor, relu), inline JSON or a JSON file.
  std::string field = "product";
  /// straight, counterexample, power_arc, inline JSON or a JSON file.
  std::string path = "straight";
  std::optional<Vec> p;
  std::optional<Vec> q;
  std::optional<Rule> rule;
  std::optional<std::size_t> nodes;
  std::size_t max_nodes = 65536;
  double tolerance = 1e-6;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> dim;
  int depth = kDefaultCantorDepth;
  /// Layer widths for the catalog relu net; input width defaults to --dim.
  std::vector<std::size_t> layers;
  double arc_exponent = 2.0;
  std::size_t i = 0;
  std::size_t j = 1;
  std::size_t samples = 101;
  bool split_kinks = true;
  OutputFormat format = OutputFormat::json;
  /// Spec file for `validate`.
  std::string spec_file;
};

struct RunResult {
  int exit_code = kExitOk;
  /// Report text in the requested format (JSON always ends with a newline).
  std::string output;
  /// Structured error or invariant message; empty on success.
  std::string message;
};

/// Executes one experiment. Never throws for spec or domain problems; those map
/// to exit status 1, failed invariants to 2.
RunResult run(const ExperimentConfig &config);

/// Parses "a,b,c" into numbers.
Vec parse_point(const std::string &text);

}  // namespace pathgrad
