#pragma once

#include <vector>

namespace pathgrad {

/// Points, gradients and path values.
using Vec = std::vector<double>;

}  // namespace pathgrad
