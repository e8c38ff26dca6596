#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pathgrad/field.hpp"
#include "pathgrad/path.hpp"
#include "pathgrad/rng.hpp"

namespace testing_support {

using pathgrad::Vec;

inline double inf_norm(const Vec &v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double inf_dist(const Vec &a, const Vec &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double l2_dist(const Vec &a, const Vec &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Mixed error: relative where the gradient is large, absolute near zero.
inline double gradient_error(const Vec &exact, const Vec &estimate) {
  return inf_dist(exact, estimate) / std::max(inf_norm(exact), 1.0);
}

inline Vec random_point(pathgrad::Rng &rng, const pathgrad::Box &box, double margin = 0.0) {
  Vec x(box.dim());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(box.lo[i] + margin, box.hi[i] - margin);
  return x;
}

// A point whose central-difference stencil of half-width h stays on the smooth
// piece containing it, so finite differences see the same closed form.
inline bool stencil_on_one_piece(const pathgrad::ScalarField &f, const Vec &x, double h) {
  if (!f.is_differentiable_at(x)) return false;
  const auto sig = f.region_signature(x);
  Vec probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (double s : {-h, h}) {
      probe[i] = x[i] + s;
      if (f.region_signature(probe) != sig) return false;
    }
    probe[i] = x[i];
  }
  return true;
}

}  // namespace testing_support
