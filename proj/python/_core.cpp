#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "pathgrad/attribution.hpp"
#include "pathgrad/spec_io.hpp"
#include "pathgrad/witness.hpp"

namespace py = pybind11;
using namespace pathgrad;

namespace {

// Specs and reports cross the boundary as JSON text; the Python layer turns
// them into dicts.
nlohmann::json parse(const std::string &text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw SpecParseError({e.what()});
  }
}

ScalarField field_from_text(const std::string &text) { return field_from_json(parse(text)); }
PathSpec path_from_text(const std::string &text) { return path_from_json(parse(text)); }

QuadratureSpec make_quad(const std::string &rule, std::size_t nodes, const Vec &split_at) {
  const auto r = rule_from_string(rule);
  if (!r) throw Error(ErrorCode::InvalidParameter, "unknown quadrature rule \"" + rule + "\"");
  return {*r, nodes, split_at};
}

std::string refine_json(const ScalarField &field, const PathSpec &path, double tol, std::size_t max_nodes,
                        bool split_kinks) {
  const auto result = refine(field, path, tol, max_nodes, split_kinks ? kink_crossings(field, path) : Vec{});
  auto out = report_to_json(result.report);
  out["history"] = nlohmann::json::array();
  for (const auto &[nodes, residual] : result.history) out["history"].push_back({nodes, residual});
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Path-integral gradient attribution";
  py::register_exception<Error>(m, "PathgradError", PyExc_ValueError);

  py::class_<ScalarField>(m, "Field")
      .def_static("from_json", &field_from_text, py::arg("spec"))
      .def("to_json", [](const ScalarField &f) { return field_to_json(f).dump(); })
      .def_property_readonly("dim", &ScalarField::dim)
      .def_property_readonly("id", &ScalarField::id)
      .def("evaluate", [](const ScalarField &f, const Vec &x) { return f.evaluate(x); }, py::arg("x"))
      .def("gradient", [](const ScalarField &f, const Vec &x) { return f.gradient(x); }, py::arg("x"))
      .def("is_differentiable_at", [](const ScalarField &f, const Vec &x) { return f.is_differentiable_at(x); },
           py::arg("x"))
      .def("finite_diff_gradient", [](const ScalarField &f, const Vec &x, double h) {
             return finite_diff_gradient(f, x, h);
           }, py::arg("x"), py::arg("h") = 1e-6);

  py::class_<PathSpec>(m, "Path")
      .def_static("from_json", &path_from_text, py::arg("spec"))
      .def("to_json", [](const PathSpec &p) { return path_to_json(p).dump(); })
      .def_property_readonly("dim", &PathSpec::dim)
      .def("eval", &PathSpec::eval, py::arg("t"))
      .def("derivative", &PathSpec::derivative, py::arg("t"))
      .def("monotonicity", [](const PathSpec &p, std::size_t grid) {
             std::vector<std::string> out;
             for (auto d : check_monotonic(p, grid).direction) out.emplace_back(to_string(d));
             return out;
           }, py::arg("grid") = kDefaultMonotonicGrid);

  m.def("integrated_gradients",
        [](const ScalarField &f, const PathSpec &p, const std::string &rule, std::size_t nodes, const Vec &split_at) {
          return report_to_json(integrated_gradients(f, p, make_quad(rule, nodes, split_at))).dump();
        },
        py::arg("field"), py::arg("path"), py::arg("rule") = "gauss_legendre", py::arg("nodes") = 32,
        py::arg("split_at") = Vec{});
  m.def("refine", &refine_json, py::arg("field"), py::arg("path"), py::arg("tol") = 1e-6,
        py::arg("max_nodes") = 65536, py::arg("split_kinks") = true);
  m.def("kink_crossings", [](const ScalarField &f, const PathSpec &p) { return kink_crossings(f, p); },
        py::arg("field"), py::arg("path"));
  m.def("demonstrate_asymmetry",
        [](const PathSpec &p, std::size_t i, std::size_t j, const std::string &rule, std::size_t nodes) {
          return asymmetry_to_json(demonstrate_asymmetry(p, i, j, make_quad(rule, nodes, {}))).dump();
        },
        py::arg("path"), py::arg("i"), py::arg("j"), py::arg("rule") = "gauss_legendre", py::arg("nodes") = 32);
  m.def("validate_spec", [](const std::string &text) {
    return validate_spec(parse(text)).normalized.dump();
  }, py::arg("spec"));
}
