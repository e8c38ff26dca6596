#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pathgrad/errors.hpp"
#include "pathgrad/path.hpp"
#include "pathgrad/rng.hpp"
#include "support.hpp"

using namespace pathgrad;
using testing_support::inf_dist;

namespace {

ErrorCode code_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::NotConverged;
}

Vec random_vec(Rng &rng, std::size_t n, double lo = -5, double hi = 5) {
  Vec v(n);
  for (double &x : v) x = rng.uniform(lo, hi);
  return v;
}

// One path of every kind between p and q.
std::vector<PathSpec> every_kind(Rng &rng, const Vec &p, const Vec &q) {
  std::vector<PathSpec> paths;
  paths.push_back(make_straight(p, q));
  if (p.size() == 2) paths.push_back(make_counterexample(p, q));
  Vec exponents(p.size());
  for (double &k : exponents) k = rng.uniform(1.0, 4.0);
  paths.push_back(make_power_path(p, q, exponents));
  paths.push_back(make_piecewise_linear(p, q, {0.3, 0.65}, {random_vec(rng, p.size()), random_vec(rng, p.size())}));
  paths.push_back(make_piecewise_linear(p, q, {}, {random_vec(rng, p.size())}));
  paths.push_back(make_monotone_cubic(p, q, {0.4}, {random_vec(rng, p.size())}));
  return paths;
}

}  // namespace

TEST_SUITE("paths") {
  TEST_CASE("straight line examples") {
    CHECK(make_straight({0, 0}, {1, 1}).eval(0.5) == Vec{0.5, 0.5});
    const auto still = make_straight({2, 3}, {2, 3});
    for (double t : {0.0, 0.3, 1.0}) CHECK(still.eval(t) == Vec{2, 3});
    CHECK(make_straight({0, 1}, {2, 5}).eval(0.25) == Vec{0.5, 2.0});
    const auto s = make_straight({0, 0}, {2, 4});
    for (double t : {0.0, 0.1, 0.77, 1.0}) CHECK(path_derivative(s, t) == Vec{2, 4});
    CHECK(code_of([] { make_straight({0, 0}, {1, 1, 1}); }) == ErrorCode::DimensionMismatch);
  }

  TEST_CASE("counterexample examples") {
    const auto same = make_counterexample({0, 0}, {1, 1});
    CHECK(std::get<CounterexampleParams>(same.params()).c == 0.0);
    CHECK(same.eval(0.5) == Vec{0.5, 0.5});

    const auto ce = make_counterexample({0, 0.5}, {1, 1.5});
    CHECK(std::get<CounterexampleParams>(ce.params()).c == 0.5);
    CHECK(ce.eval(0.5) == Vec{0.375, 0.875});
    CHECK(path_derivative(ce, 0.0)[0] == doctest::Approx(0.5));

    const auto flat = make_counterexample({0, 0}, {1, 0});
    CHECK(std::get<CounterexampleParams>(flat.params()).c == 1.0);
    for (int k = 0; k <= 100; ++k) CHECK(flat.eval(k / 100.0)[1] == 0.0);

    CHECK(code_of([] { make_counterexample({0, 0, 0}, {1, 1, 1}); }) == ErrorCode::DimensionMismatch);
  }

  TEST_CASE("counterexample matches direct substitution") {
    Rng rng(12);
    for (int n = 0; n < 200; ++n) {
      const Vec p = random_vec(rng, 2, -2, 2);
      const Vec q = random_vec(rng, 2, -2, 2);
      const auto path = make_counterexample(p, q);
      for (int k = 0; k <= 20; ++k) {
        const double t = k / 20.0;
        const auto expected = oracle::counterexample_point(p[0], p[1], q[0], q[1], t);
        const Vec got = path.eval(t);
        REQUIRE(got[0] == doctest::Approx(expected[0]).epsilon(1e-13));
        REQUIRE(got[1] == doctest::Approx(expected[1]).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("power arc examples") {
    CHECK(make_power_arc(1.0).eval(0.3) == Vec{0.3, 0.3});
    CHECK(make_power_arc(2.0).eval(0.5) == Vec{0.5, 0.25});
    const auto arc = make_power_arc(2.0);
    CHECK(arc.eval(0.0) == Vec{0.0, 0.0});
    CHECK(arc.eval(1.0) == Vec{1.0, 1.0});
    CHECK(path_derivative(arc, 0.5) == Vec{1.0, 1.0});
    CHECK(code_of([] { make_power_arc(0.5); }) == ErrorCode::InvalidParameter);
  }

  TEST_CASE("parameter range") {
    const auto s = make_straight({0, 0}, {1, 1});
    CHECK(code_of([&] { eval_path(s, -0.01); }) == ErrorCode::ParameterOutOfRange);
    CHECK(code_of([&] { path_derivative(s, 1.01); }) == ErrorCode::ParameterOutOfRange);
    CHECK(code_of([&] { eval_path(s, std::nan("")); }) == ErrorCode::ParameterOutOfRange);
  }

  TEST_CASE("piecewise linear knots and one-sided derivatives") {
    const auto pl = make_piecewise_linear({0, 0}, {1, 1}, {0.5}, {{1, 0}});
    CHECK(pl.knots() == Vec{0.5});
    CHECK(pl.eval(0.5) == Vec{1, 0});
    CHECK(pl.eval(0.25) == Vec{0.5, 0});
    CHECK(path_derivative(pl, 0.25) == Vec{2, 0});
    CHECK(path_derivative(pl, 0.75) == Vec{0, 2});
    CHECK(path_derivative(pl, 0.5) == Vec{0, 2});  // right-sided at the knot
    CHECK(path_derivative(pl, 1.0) == Vec{0, 2});
    CHECK(make_straight({0}, {1}).knots().empty());

    CHECK(code_of([] { make_piecewise_linear({0, 0}, {1, 1}, {0.6, 0.4}, {{0, 0}, {1, 1}}); }) ==
          ErrorCode::InvalidParameter);
    CHECK(code_of([] { make_piecewise_linear({0, 0}, {1, 1}, {1.0}, {{0, 0}}); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([] { make_piecewise_linear({0, 0}, {1, 1}, {}, {{0, 0, 0}}); }) ==
          ErrorCode::DimensionMismatch);
  }

  TEST_CASE("monotone cubic keeps monotone data monotone") {
    Rng rng(6);
    for (int n = 0; n < 100; ++n) {
      Vec mid1{rng.uniform(0.05, 0.45), rng.uniform(0.05, 0.45)};
      Vec mid2{rng.uniform(0.55, 0.95), rng.uniform(0.55, 0.95)};
      const auto path = make_monotone_cubic({0, 0}, {1, 1}, {0.3, 0.7}, {mid1, mid2});
      CHECK(path.eval(0.3) == mid1);
      const auto report = check_monotonic(path);
      for (std::size_t i = 0; i < 2; ++i) REQUIRE(report.direction[i] == Direction::increasing);
    }
  }

  TEST_CASE("check_monotonic examples") {
    const auto straight = check_monotonic(make_straight({0, 0}, {1, 1}));
    CHECK(straight.direction == std::vector<Direction>{Direction::increasing, Direction::increasing});
    CHECK(straight.strict == std::vector<bool>{true, true});
    CHECK(straight.samples_used == kDefaultMonotonicGrid);

    const auto ce = check_monotonic(make_counterexample({0, 0.5}, {1, 1.5}), 1001);
    CHECK(ce.direction == std::vector<Direction>{Direction::increasing, Direction::increasing});
    CHECK(ce.strict == std::vector<bool>{true, true});

    const auto wild = check_monotonic(make_counterexample({0, 1}, {1, 3}), 1001);
    CHECK(wild.direction[0] == Direction::non_monotonic);
    CHECK_FALSE(wild.monotonic(0));
    CHECK(path_derivative(make_counterexample({0, 1}, {1, 3}), 0.0)[0] == doctest::Approx(-4.0));

    const auto down = check_monotonic(make_straight({1, 0}, {0, 0}));
    CHECK(down.direction == std::vector<Direction>{Direction::decreasing, Direction::constant});
    CHECK(down.strict == std::vector<bool>{true, false});

    const auto arc = check_monotonic(make_power_arc(2.0));
    CHECK(arc.direction[1] == Direction::increasing);
    CHECK_FALSE(arc.strict[1]);  // derivative 2t vanishes at t = 0

    CHECK(code_of([] { check_monotonic(make_power_arc(2.0), 1); }) == ErrorCode::InvalidParameter);
  }

  TEST_CASE("check_endpoints examples") {
    Rng rng(1);
    for (auto &path : every_kind(rng, {0, 0.5}, {1, 1.5})) CHECK(check_endpoints(path, {0, 0.5}, {1, 1.5}, 0.0));
    const auto s = make_straight({0, 0}, {1, 1});
    CHECK_FALSE(check_endpoints(s, {0, 0}, {1, 1 + 1e-6}, 1e-9));
    CHECK(check_endpoints(make_counterexample({0, 0.5}, {1, 1.5}), {0, 0.5}, {1, 1.5}, 1e-12));
    CHECK(code_of([&] { check_endpoints(s, {0, 0, 0}, {1, 1, 1}, 0.0); }) == ErrorCode::DimensionMismatch);
  }
}

TEST_SUITE("path invariants") {
  TEST_CASE("endpoints are exact for every constructor") {
    Rng rng(100);
    for (int n = 0; n < 1000; ++n) {
      const std::size_t dim = n % 3 == 0 ? 3 : 2;
      const Vec p = random_vec(rng, dim);
      const Vec q = random_vec(rng, dim);
      for (const auto &path : every_kind(rng, p, q)) {
        REQUIRE(check_endpoints(path, p, q, 1e-12));
        REQUIRE(path.eval(0.0) == p);
        REQUIRE(path.eval(1.0) == q);
      }
    }
  }

  TEST_CASE("counterexample reduces to the straight line when C = 0") {
    Rng rng(101);
    for (int n = 0; n < 100; ++n) {
      const double a = rng.uniform(-5, 5);
      const double b = rng.uniform(-5, 5);
      const auto ce = make_counterexample({a, a}, {b, b});
      const auto s = make_straight({a, a}, {b, b});
      for (int k = 0; k < 1000; ++k) {
        const double t = k / 999.0;
        REQUIRE(inf_dist(ce.eval(t), s.eval(t)) == 0.0);
      }
    }
  }

  TEST_CASE("counterexample assignment is symmetric") {
    Rng rng(102);
    for (int n = 0; n < 200; ++n) {
      const Vec p = random_vec(rng, 2);
      const Vec q = random_vec(rng, 2);
      const auto forward = make_counterexample(p, q);
      const auto swapped = make_counterexample({p[1], p[0]}, {q[1], q[0]});
      for (int k = 0; k <= 100; ++k) {
        const Vec a = forward.eval(k / 100.0);
        const Vec b = swapped.eval(k / 100.0);
        REQUIRE(a[0] == b[1]);
        REQUIRE(a[1] == b[0]);
      }
    }
  }

  TEST_CASE("derivative matches finite differences") {
    Rng rng(103);
    for (int n = 0; n < 50; ++n) {
      const Vec p = random_vec(rng, 2);
      const Vec q = random_vec(rng, 2);
      for (const auto &path : every_kind(rng, p, q)) {
        const Vec knots = path.knots();
        for (int k = 1; k <= 100; ++k) {
          const double t = k / 101.0;
          const double h = 1e-6;
          bool near_knot = false;
          for (double knot : knots) near_knot = near_knot || std::abs(knot - t) <= h;
          if (near_knot) continue;
          const Vec up = path.eval(t + h);
          const Vec down = path.eval(t - h);
          const Vec d = path.derivative(t);
          for (std::size_t i = 0; i < d.size(); ++i) {
            const double fd = (up[i] - down[i]) / (2 * h);
            REQUIRE(std::abs(fd - d[i]) <= 1e-8);
          }
        }
      }
    }
  }

  TEST_CASE("counterexample monotonicity follows C <= |q_i - p_i|") {
    Rng rng(104);
    int monotone = 0;
    int not_monotone = 0;
    for (int n = 0; n < 1000; ++n) {
      const Vec p = random_vec(rng, 2, -1, 1);
      const Vec q = random_vec(rng, 2, -1, 1);
      const auto report = check_monotonic(make_counterexample(p, q));
      for (int i = 0; i < 2; ++i) {
        const bool expected = oracle::counterexample_monotone(p[0], p[1], q[0], q[1], i);
        REQUIRE(report.monotonic(static_cast<std::size_t>(i)) == expected);
        (expected ? monotone : not_monotone) += 1;
      }
    }
    // Both sides of the partition are exercised.
    CHECK(monotone > 100);
    CHECK(not_monotone > 100);
  }
}
