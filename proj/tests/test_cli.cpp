#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pathgrad/experiments.hpp"
#include "pathgrad/rng.hpp"
#include "pathgrad/spec_io.hpp"

using namespace pathgrad;

namespace {

std::filesystem::path write_temp(const std::string &name, const std::string &text) {
  const auto dir = std::filesystem::temp_directory_path() / "pathgrad_tests";
  std::filesystem::create_directories(dir);
  const auto file = dir / name;
  std::ofstream(file, std::ios::binary) << text;
  return file;
}

std::vector<std::string> problems_of(const json &spec) {
  try {
    validate_spec(spec);
  } catch (const SpecParseError &e) {
    return e.problems();
  }
  return {};
}

bool mentions(const std::vector<std::string> &problems, const std::string &needle) {
  for (const auto &p : problems) {
    if (p.find(needle) != std::string::npos) return true;
  }
  return false;
}

ExperimentConfig config_for(Command command) {
  ExperimentConfig c;
  c.command = command;
  return c;
}

std::vector<json> catalog_specs() {
  return {
      json{{"kind", "linear"}, {"dim", 3}, {"params", {{"coefficients", {1.5, -2, 0.25}}, {"offset", 0.1}}}},
      json{{"kind", "bilinear_product"}, {"dim", 2}},
      json{{"kind", "bilinear_product"}, {"dim", 4}, {"params", {{"i", 1}, {"j", 3}}}, {"domain", {-2, 3}}},
      json{{"kind", "max_coord"}, {"dim", 3}, {"domain", {{"lo", {-1, -2, -3}}, {"hi", {1, 2, 3}}}}},
      json{{"kind", "witness"}, {"dim", 2}, {"params", {{"alpha", 0.25}, {"beta", 0.75}}}, {"id", "w"}},
      json{{"kind", "cantor_1d"}, {"params", {{"depth", 12}}}},
      json{{"kind", "relu_net"},
           {"dim", 2},
           {"params", {{"activation", "max_pool_final"}, {"weights", {{{1, -1}, {0.5, 2}}}}, {"biases", {{0, 0.5}}}}}},
      json{{"random_relu", {{"layers", {3, 4, 1}}, {"seed", 17}}}},
      json{{"kind", "straight"}, {"p", {0, 0}}, {"q", {1, 2}}},
      json{{"kind", "counterexample_quadratic"}, {"p", {0, 0.5}}, {"q", {1, 1.5}}},
      json{{"kind", "power_arc"}, {"params", {{"k", 2.5}}}},
      json{{"kind", "power_arc"}, {"p", {0, 1, 2}}, {"q", {1, 1, 0}}, {"params", {{"exponents", {1, 2, 3}}}}},
      json{{"kind", "piecewise_linear"}, {"p", {0, 0}}, {"q", {1, 1}}, {"params", {{"knots", {{1, 0}}}}}},
      json{{"kind", "monotone_cubic"},
           {"p", {0, 0}},
           {"q", {1, 1}},
           {"params", {{"knots", {{0.2, 0.6}}}, {"times", {0.4}}}},
           {"id", "spline"}},
  };
}

}  // namespace

TEST_SUITE("spec io") {
  TEST_CASE("minimal product spec gets the default box") {
    const auto v = validate_spec(json{{"kind", "bilinear_product"}, {"dim", 2}});
    CHECK(v.type == SpecType::field);
    CHECK(v.normalized["domain"] == json({-10.0, 10.0}));
    CHECK(v.normalized["params"]["i"] == 0);
  }

  TEST_CASE("mismatched relu shapes name the layer") {
    const json spec{{"kind", "relu_net"},
                    {"dim", 2},
                    {"params", {{"weights", {{{1, 2}, {3, 4}}, {{1, 2, 3}}}}, {"biases", {{0, 0}, {0}}}}}};
    const auto problems = problems_of(spec);
    REQUIRE_FALSE(problems.empty());
    CHECK(mentions(problems, "layer 1"));
  }

  TEST_CASE("counterexample in three dimensions") {
    const auto problems = problems_of(json{{"kind", "counterexample"}, {"p", {0, 0, 0}}, {"q", {1, 1, 1}}});
    CHECK(mentions(problems, "DimensionMismatch"));
  }

  TEST_CASE("all problems are reported together") {
    const json spec{{"kind", "witness"}, {"dim", "two"}, {"domain", {1}}, {"params", {{"alpha", "x"}}}};
    CHECK(problems_of(spec).size() >= 3);
  }

  TEST_CASE("syntax errors carry the line") {
    const auto file = write_temp("broken.json", "{\n  \"kind\": \"straight\",\n  \"p\": [0, 0\n}\n");
    try {
      validate_spec_file(file);
      FAIL("expected a parse error");
    } catch (const SpecParseError &e) {
      REQUIRE(e.problems().size() == 1);
      CHECK(e.problems()[0].find("broken.json:4") != std::string::npos);
    }
  }

  TEST_CASE("emitted specs validate back to themselves") {
    for (const auto &spec : catalog_specs()) {
      CAPTURE(spec.dump());
      const auto once = validate_spec(spec);
      const auto twice = validate_spec(once.normalized);
      CHECK(twice.normalized == once.normalized);
      CHECK(twice.type == once.type);
      if (once.type == SpecType::field && !spec.contains("random_relu")) {
        const auto field = field_from_json(spec);
        CHECK(field_to_json(field_from_json(field_to_json(field))) == field_to_json(field));
      }
      if (once.type == SpecType::path) {
        const auto path = path_from_json(spec);
        CHECK(path_to_json(path_from_json(path_to_json(path))) == path_to_json(path));
      }
    }
  }

  TEST_CASE("random relu spec builds the documented network") {
    const std::vector<std::size_t> widths{3, 4, 1};
    const auto from_spec = field_from_json(json{{"random_relu", {{"layers", widths}, {"seed", 17}}}});
    const auto direct = ScalarField::relu_net(random_relu_net(widths, 17));
    Rng rng(1);
    for (int k = 0; k < 100; ++k) {
      const Vec x{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
      REQUIRE(from_spec.evaluate(x) == direct.evaluate(x));
    }
  }

  TEST_CASE("reports use shortest round-trip reals") {
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(1.0 / 3) == "0.3333333333333333");
    CHECK(format_real(-2.0) == "-2");
    const auto r = integrated_gradients(ScalarField::bilinear_product(), make_power_arc(2.0), {Rule::gauss_legendre, 32, {}});
    const json j = report_to_json(r);
    CHECK(j["attributions"][0].get<double>() == r.attributions[0]);
    CHECK(j["converged"].is_null());
    CHECK(j["quadrature"]["rule"] == "gauss_legendre");
    CHECK(j["field"] == "bilinear_product");
    CHECK(j["path"] == "power_arc");
    const std::string csv = report_to_csv(r);
    CHECK(csv.rfind("coordinate,attribution\n0,", 0) == 0);
  }
}

TEST_SUITE("run") {
  TEST_CASE("figure reproduces the parabola areas") {
    auto c = config_for(Command::figure);
    c.nodes = 64;
    const auto out = run(c);
    REQUIRE(out.exit_code == kExitOk);
    const json j = json::parse(out.output);
    CHECK(j["attributions"][0].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(j["attributions"][1].get<double>() == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(j["sum"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j["table"]["t"].size() == 101);
    CHECK(j["table"]["gamma2"][50].get<double>() == 0.25);

    c.format = OutputFormat::csv;
    const auto csv = run(c);
    CHECK(csv.output.find("t,gamma1,gamma2\n0,0,0\n") != std::string::npos);
  }

  TEST_CASE("symmetry check on the straight diagonal") {
    auto c = config_for(Command::check_symmetry);
    c.p = Vec{0, 0};
    c.q = Vec{1, 1};
    c.tolerance = 1e-9;
    const auto out = run(c);
    CHECK(out.exit_code == kExitOk);
    CHECK(std::abs(json::parse(out.output)["check"]["gap"].get<double>()) <= 1e-9);

    c.path = "power_arc";
    c.p.reset();
    c.q.reset();
    CHECK(run(c).exit_code == kExitInvariant);
  }

  TEST_CASE("Cantor completeness check fails with status 2") {
    auto c = config_for(Command::check_completeness);
    c.field = "cantor";
    c.nodes = 1024;
    c.p = Vec{0};
    c.q = Vec{1};
    const auto out = run(c);
    CHECK(out.exit_code == kExitInvariant);
    CHECK(json::parse(out.output)["check"]["residual_abs"].get<double>() == doctest::Approx(1.0).epsilon(0.05));
    CHECK_FALSE(out.message.empty());

    c.nodes.reset();
    c.tolerance = 1e-2;
    const auto refined = run(c);
    CHECK(refined.exit_code == kExitInvariant);
    CHECK(json::parse(refined.output)["converged"] == false);
  }

  TEST_CASE("completeness check passes for smooth fields") {
    auto c = config_for(Command::check_completeness);
    c.path = "power_arc";
    c.tolerance = 1e-9;
    const auto out = run(c);
    CHECK(out.exit_code == kExitOk);
    CHECK(json::parse(out.output)["converged"] == true);

    c.max_nodes = 32;
    c.tolerance = 1e-12;
    CHECK(run(c).exit_code == kExitInvariant);
  }

  TEST_CASE("witness command") {
    auto c = config_for(Command::witness);
    c.path = "power_arc";
    const auto out = run(c);
    REQUIRE(out.exit_code == kExitOk);
    const json j = json::parse(out.output);
    CHECK(j["gap"].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-9));
    CHECK(j["interval"]["u"] == 0.0);
    CHECK(j["interval"]["v"] == 1.0);

    c.path = "straight";
    const auto none = run(c);
    CHECK(none.exit_code == kExitOk);
    CHECK(json::parse(none.output)["status"] == "no_violation");
  }

  TEST_CASE("counterexample command") {
    auto c = config_for(Command::counterexample);
    c.p = Vec{0, 0.5};
    c.q = Vec{1, 1.5};
    const auto out = run(c);
    REQUIRE(out.exit_code == kExitOk);
    const json j = json::parse(out.output);
    CHECK(j["c"] == 0.5);
    CHECK(j["straight_deviation"].get<double>() > 0.1);
    CHECK(j["monotonicity"][0]["strict"] == true);

    c.p = Vec{0.3, 0.3};
    c.q = Vec{-1, -1};
    CHECK(json::parse(run(c).output)["straight_deviation"] == 0.0);

    c.p.reset();
    CHECK(run(c).exit_code == kExitUsage);
  }

  TEST_CASE("usage and spec errors exit with status 1") {
    auto c = config_for(Command::attribute);
    c.field = "relu";
    CHECK(run(c).exit_code == kExitUsage);  // no seed

    c.field = "product";
    c.q = Vec{20, 0};
    const auto out = run(c);
    CHECK(out.exit_code == kExitUsage);
    CHECK(json::parse(out.message)["error"] == "PathLeavesDomain");

    c.q = Vec{1, 1, 1};
    CHECK(run(c).exit_code == kExitUsage);

    c.q.reset();
    c.tolerance = -1;
    CHECK(run(c).exit_code == kExitUsage);

    auto v = config_for(Command::validate);
    v.spec_file = "/nonexistent/spec.json";
    CHECK(run(v).exit_code == kExitUsage);
  }

  TEST_CASE("inline and file specs") {
    auto c = config_for(Command::attribute);
    c.field = R"({"kind": "linear", "dim": 2, "params": {"coefficients": [2, -3]}})";
    c.path = write_temp("path.json", R"({"kind": "straight", "p": [0, 0], "q": [1, 1]})").string();
    c.nodes = 4;
    const auto out = run(c);
    REQUIRE(out.exit_code == kExitOk);
    CHECK(json::parse(out.output)["attributions"] == json({2.0, -3.0}));

    auto v = config_for(Command::validate);
    v.spec_file = write_temp("field.json", R"({"kind": "max_coord", "dim": 2})").string();
    const auto validated = run(v);
    CHECK(validated.exit_code == kExitOk);
    CHECK(json::parse(validated.output)["domain"] == json({-10.0, 10.0}));
  }

  TEST_CASE("identical configs give byte-identical reports") {
    std::vector<ExperimentConfig> configs;
    auto a = config_for(Command::attribute);
    a.field = "relu";
    a.seed = 42;
    a.dim = 4;
    a.p = Vec{-1, 0.5, 0.25, 2};
    a.q = Vec{1, -1, 0.5, 0};
    configs.push_back(a);
    auto b = config_for(Command::check_completeness);
    b.field = "max";
    b.path = "counterexample";
    b.p = Vec{0, 0.5};
    b.q = Vec{1, -1};
    configs.push_back(b);
    configs.push_back(config_for(Command::figure));
    auto w = config_for(Command::witness);
    w.path = "power_arc";
    w.arc_exponent = 3;
    configs.push_back(w);
    for (const auto &c : configs) {
      const auto first = run(c);
      for (int k = 0; k < 3; ++k) {
        const auto again = run(c);
        REQUIRE(again.output == first.output);
        REQUIRE(again.exit_code == first.exit_code);
      }
    }
  }

  TEST_CASE("fuzzed invalid specs always exit with status 1") {
    Rng rng(500);
    const auto valid = catalog_specs();
    int tried = 0;
    for (int n = 0; n < 400; ++n) {
      json spec = valid[rng.next_u64() % valid.size()];
      std::string text;
      switch (rng.uniform_int(0, 5)) {
        case 0: {  // truncated document
          const std::string full = spec.dump();
          text = full.substr(0, 1 + rng.next_u64() % (full.size() - 1));
          break;
        }
        case 1:  // unknown kind
          spec.erase("random_relu");
          spec["kind"] = "kind_" + std::to_string(rng.next_u64() % 1000);
          break;
        case 2:  // kind of the wrong type
          spec.erase("random_relu");
          spec["kind"] = rng.uniform(-5, 5);
          break;
        case 3:  // not an object at all
          spec = json::array({spec});
          break;
        case 4:  // a number where a list belongs
          if (spec.contains("p")) {
            spec["p"] = "origin";
          } else if (spec.contains("random_relu")) {
            spec["random_relu"]["layers"] = 3;
          } else {
            spec["domain"] = {1, 2, 3};
          }
          break;
        default:  // inverted domain
          if (spec.contains("p")) {
            spec["p"] = json::array();
          } else {
            spec["domain"] = {5, -5};
          }
          break;
      }
      if (text.empty()) text = spec.dump();
      auto v = config_for(Command::validate);
      v.spec_file = write_temp("fuzz.json", text).string();
      const auto out = run(v);
      CAPTURE(text);
      REQUIRE(out.exit_code == kExitUsage);
      REQUIRE(out.output.empty());
      ++tried;
    }
    CHECK(tried == 400);
  }
}
