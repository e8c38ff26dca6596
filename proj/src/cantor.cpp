#include "pathgrad/cantor.hpp"

#include <cmath>
#include <string>

#include "pathgrad/errors.hpp"

namespace pathgrad {

CantorPoint cantor_point(double x, int depth) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::OutOfDomain, "cantor argument " + std::to_string(x) + " outside [0, 1]");
  }
  if (depth < 1) throw Error(ErrorCode::InvalidParameter, "cantor depth must be >= 1");

  CantorPoint out;
  if (x == 1.0) {
    out.value = 1.0;
    return out;
  }

  // Extended precision keeps the remainder accurate through 24+ digits.
  long double rest = x;
  long double value = 0.0L;
  long double weight = 0.5L;
  std::int64_t code = 1;
  for (int k = 0; k < depth; ++k) {
    rest *= 3.0L;
    int digit = static_cast<int>(std::floor(rest));
    if (digit > 2) digit = 2;
    rest -= digit;
    code = code * 3 + digit;
    if (digit == 1) {
      out.value = static_cast<double>(value + weight);
      out.on_plateau = true;
      out.plateau_code = code;
      return out;
    }
    if (digit == 2) value += weight;
    weight *= 0.5L;
  }
  // Unresolved cell of Cantor mass 2^-depth = 2 * weight.
  out.value = static_cast<double>(value + 2.0L * weight * rest);
  return out;
}

double cantor_value(double x, int depth) { return cantor_point(x, depth).value; }

}  // namespace pathgrad
