#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "pathgrad/attribution.hpp"
#include "pathgrad/field.hpp"
#include "pathgrad/path.hpp"
#include "pathgrad/witness.hpp"

namespace pathgrad {

using json = nlohmann::json;

// Field spec:  {"kind", "dim", "domain": [lo, hi] | {"lo": [...], "hi": [...]}, "params": {...}, "id"?}
// Random net:  {"random_relu": {"layers": [...], "seed": u64, "activation"?}, "domain"?, "id"?}
// Path spec:   {"kind", "p": [...], "q": [...], "params": {...}, "id"?}
//
// Parsing collects every problem before failing with SpecParseError.

ScalarField field_from_json(const json &spec);
json field_to_json(const ScalarField &field);
/// Defaults filled in; random_relu specs stay in seed form.
json normalize_field_spec(const json &spec);

PathSpec path_from_json(const json &spec);
json path_to_json(const PathSpec &path);
json normalize_path_spec(const json &spec);

enum class SpecType { field, path };

struct ValidatedSpec {
  SpecType type;
  json normalized;
};

/// Detects field vs path by "kind" (or "random_relu") and normalizes.
ValidatedSpec validate_spec(const json &spec);
/// Reads and validates a file; JSON syntax errors carry the byte position.
ValidatedSpec validate_spec_file(const std::filesystem::path &file);
/// Parses text that is either inline JSON or a path to a JSON file.
json load_json_argument(const std::string &text);

json quadrature_to_json(const QuadratureSpec &quad);
json report_to_json(const AttributionReport &report);
json interval_to_json(const ViolationInterval &interval);
json asymmetry_to_json(const AsymmetryReport &report);
/// Header `coordinate,attribution`, one row per coordinate.
std::string report_to_csv(const AttributionReport &report);

/// Shortest decimal string that parses back to the same double.
std::string format_real(double x);

}  // namespace pathgrad
