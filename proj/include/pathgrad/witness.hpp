#pragma once

#include <cstddef>
#include <optional>

#include "pathgrad/attribution.hpp"
#include "pathgrad/field.hpp"
#include "pathgrad/path.hpp"

namespace pathgrad {

/// Maximal parameter interval (u, v) on which coordinates i and j of a path
/// differ with constant sign. alpha and beta are the shared path values at the
/// ends (the smaller and larger of them), which become the ramp breakpoints.
struct ViolationInterval {
  double u = 0.0;
  double v = 1.0;
  double alpha = 0.0;
  double beta = 1.0;
  /// gamma_j < gamma_i on the interval, i.e. the roles of i and j are exchanged
  /// relative to gamma_i < gamma_j.
  bool swapped = false;
};

inline constexpr std::size_t kDefaultWitnessGrid = 4097;
inline constexpr double kEndpointMatchTolerance = 1e-12;
inline constexpr double kDegenerateWidth = 1e-9;

/// Scans d(t) = gamma_j(t) - gamma_i(t) on a uniform grid, takes the sample of
/// largest |d| and bisects outward to the nearest zeros. Returns nullopt when d
/// vanishes on the grid or the interval's value range is below 1e-9.
///
/// Throws EndpointMismatch unless gamma_i and gamma_j agree at t = 0 and t = 1.
std::optional<ViolationInterval> violation_interval(const PathSpec &path, std::size_t i, std::size_t j,
                                                    std::size_t grid = kDefaultWitnessGrid);

/// F(x) = g(x_i) g(x_j), g the ramp clamped to [alpha, beta].
ScalarField make_witness_field(std::size_t dim, std::size_t i, std::size_t j, double alpha, double beta,
                               std::optional<Box> box = {});

struct AsymmetryReport {
  ViolationInterval interval;
  std::size_t smaller = 0;  // coordinate lying below the other on (u, v)
  std::size_t larger = 1;
  /// +1 when the path increases in coordinates i, j, -1 when it decreases.
  double orientation = 1.0;
  /// orientation * (IG_smaller - IG_larger); strictly positive for a valid witness.
  double gap = 0.0;
  AttributionReport attribution;
};

/// Builds the witness field for the path's violation interval and integrates it
/// along the path with panels split at u and v.
///
/// Throws NoViolation for paths with gamma_i = gamma_j throughout, and
/// NotMonotonic unless coordinates i and j are strictly monotone in the same
/// direction.
AsymmetryReport demonstrate_asymmetry(const PathSpec &path, std::size_t i, std::size_t j,
                                      const QuadratureSpec &quad);

}  // namespace pathgrad
