#include "pathgrad/witness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pathgrad/errors.hpp"

namespace pathgrad {

namespace {

void require_pair(const PathSpec &path, std::size_t i, std::size_t j) {
  if (i >= path.dim() || j >= path.dim()) {
    throw Error(ErrorCode::IndexOutOfRange, "coordinate index outside path dimension");
  }
  if (i == j) throw Error(ErrorCode::InvalidParameter, "coordinates i and j must differ");
}

double grid_t(std::size_t k, std::size_t grid) { return static_cast<double>(k) / static_cast<double>(grid - 1); }

/// Bisects between `inside` (sign * d > 0) and `outside` (sign * d <= 0) and
/// returns the outside end once the bracket is below 1e-12.
template <class F>
double locate_zero(F &&positive, double inside, double outside) {
  while (std::abs(inside - outside) > 1e-12) {
    const double mid = 0.5 * (inside + outside);
    if (mid == inside || mid == outside) break;
    if (positive(mid)) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return outside;
}

bool strictly_monotone_samples(const PathSpec &path, std::size_t coord, double orientation, std::size_t grid) {
  double prev = path.eval(0.0)[coord];
  for (std::size_t k = 1; k < grid; ++k) {
    const double cur = path.eval(grid_t(k, grid))[coord];
    if (!(orientation * (cur - prev) > 0.0)) return false;
    prev = cur;
  }
  return true;
}

}  // namespace

std::optional<ViolationInterval> violation_interval(const PathSpec &path, std::size_t i, std::size_t j,
                                                    std::size_t grid) {
  require_pair(path, i, j);
  if (grid < 3) throw Error(ErrorCode::InvalidParameter, "violation scan needs at least 3 grid points");
  const Vec a = path.eval(0.0);
  const Vec b = path.eval(1.0);
  if (std::abs(a[i] - a[j]) > kEndpointMatchTolerance || std::abs(b[i] - b[j]) > kEndpointMatchTolerance) {
    std::ostringstream msg;
    msg << "coordinates " << i << " and " << j << " differ at an endpoint: gamma(0)=(" << a[i] << ", " << a[j]
        << "), gamma(1)=(" << b[i] << ", " << b[j] << ")";
    throw Error(ErrorCode::EndpointMismatch, msg.str());
  }

  auto gap_at = [&](double t) {
    const Vec x = path.eval(t);
    return x[j] - x[i];
  };

  Vec d(grid);
  std::size_t peak = 0;
  for (std::size_t k = 0; k < grid; ++k) {
    d[k] = gap_at(grid_t(k, grid));
    if (std::abs(d[k]) > std::abs(d[peak])) peak = k;
  }
  if (std::abs(d[peak]) <= kEndpointMatchTolerance) return std::nullopt;

  const double sign = d[peak] > 0.0 ? 1.0 : -1.0;
  auto positive = [&](double t) { return sign * gap_at(t) > 0.0; };

  std::size_t lo = peak;
  while (lo > 0 && sign * d[lo - 1] > 0.0) --lo;
  std::size_t hi = peak;
  while (hi + 1 < grid && sign * d[hi + 1] > 0.0) ++hi;

  ViolationInterval out;
  out.swapped = sign < 0.0;
  // An end of the scan that is still inside the interval is an endpoint of [0, 1].
  out.u = lo == 0 ? 0.0 : locate_zero(positive, grid_t(lo, grid), grid_t(lo - 1, grid));
  out.v = hi + 1 == grid ? 1.0 : locate_zero(positive, grid_t(hi, grid), grid_t(hi + 1, grid));

  const Vec xu = path.eval(out.u);
  const Vec xv = path.eval(out.v);
  out.alpha = std::min({xu[i], xu[j], xv[i], xv[j]});
  out.beta = std::max({xu[i], xu[j], xv[i], xv[j]});
  if (out.beta - out.alpha <= kDegenerateWidth) return std::nullopt;
  return out;
}

ScalarField make_witness_field(std::size_t dim, std::size_t i, std::size_t j, double alpha, double beta,
                               std::optional<Box> box) {
  return ScalarField::witness(dim, i, j, alpha, beta, std::move(box));
}

AsymmetryReport demonstrate_asymmetry(const PathSpec &path, std::size_t i, std::size_t j, const QuadratureSpec &quad) {
  auto interval = violation_interval(path, i, j);
  if (!interval) {
    throw Error(ErrorCode::NoViolation,
                "coordinates " + std::to_string(i) + " and " + std::to_string(j) + " coincide along the path");
  }

  const auto mono = check_monotonic(path);
  const Direction dir = mono.direction[i];
  if (dir != mono.direction[j] || (dir != Direction::increasing && dir != Direction::decreasing)) {
    throw Error(ErrorCode::NotMonotonic, "coordinates " + std::to_string(i) + " and " + std::to_string(j) +
                                             " are not monotone in a common direction");
  }
  const double orientation = dir == Direction::increasing ? 1.0 : -1.0;
  if (!strictly_monotone_samples(path, i, orientation, kDefaultMonotonicGrid) ||
      !strictly_monotone_samples(path, j, orientation, kDefaultMonotonicGrid)) {
    throw Error(ErrorCode::NotMonotonic, "coordinates are monotone but not strictly");
  }

  // The witness box covers the default box and the whole path.
  Box box = Box::uniform(path.dim(), kDefaultDomainLo, kDefaultDomainHi);
  for (std::size_t k = 0; k < kDefaultMonotonicGrid; ++k) {
    const Vec x = path.eval(grid_t(k, kDefaultMonotonicGrid));
    for (std::size_t c = 0; c < x.size(); ++c) {
      box.lo[c] = std::min(box.lo[c], x[c] - 1.0);
      box.hi[c] = std::max(box.hi[c], x[c] + 1.0);
    }
  }
  const ScalarField field = make_witness_field(path.dim(), i, j, interval->alpha, interval->beta, box);

  QuadratureSpec split = quad;
  for (double t : {interval->u, interval->v}) {
    if (t > 0.0 && t < 1.0) split.split_at.push_back(t);
  }
  std::sort(split.split_at.begin(), split.split_at.end());
  split.split_at.erase(std::unique(split.split_at.begin(), split.split_at.end()), split.split_at.end());

  AsymmetryReport out;
  out.interval = *interval;
  out.smaller = interval->swapped ? j : i;
  out.larger = interval->swapped ? i : j;
  out.orientation = orientation;
  out.attribution = integrated_gradients(field, path, split);
  out.gap = orientation * symmetry_gap(out.attribution, out.smaller, out.larger);
  return out;
}

}  // namespace pathgrad
