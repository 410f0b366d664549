#include "fracmv/types.hpp"

#include <numbers>

namespace fracmv {

namespace {

void check_dimension(int n) {
  if (n != 1 && n != 2)
    throw std::invalid_argument("dimension n must be 1 or 2, got " + std::to_string(n));
}

}  // namespace

Params Params::from_s(int n, double s) {
  check_dimension(n);
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("s must lie in the open range (0,1), got " + std::to_string(s));
  return Params(n, 1.0 - 2.0 * s, s);
}

Params Params::from_a(int n, double a) {
  check_dimension(n);
  if (!(a > -1.0 && a < 1.0))
    throw std::invalid_argument("a must lie in the open range (-1,1), got " + std::to_string(a));
  return Params(n, a, 0.5 * (1.0 - a));
}

double sphere_area(int n) {
  check_dimension(n);
  return n == 1 ? 2.0 : 2.0 * std::numbers::pi;
}

}  // namespace fracmv
