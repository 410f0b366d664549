#pragma once

#include "fracmv/field.hpp"
#include "fracmv/types.hpp"

namespace fracmv {

/// Value together with an estimate of its absolute error.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Normalizing constant C of P^a_y(x) = C y^{1-a} (|x|^2 + y^2)^{-(n+1-a)/2},
/// computed numerically: Gauss-Legendre panels on [0, 4] and the binomial
/// series of the power-law tail beyond.
double poisson_constant(int n, double a);

/// The extension Poisson kernel for fixed (n, a).
class ExtensionKernel {
 public:
  explicit ExtensionKernel(const Params& params);

  int n() const { return params_.n(); }
  double a() const { return params_.a(); }
  double s() const { return params_.s(); }
  double C() const { return C_; }
  const Params& params() const { return params_; }
  /// Decay exponent n + 1 - a of the kernel in |x|.
  double beta() const { return beta_; }

  /// P^a_y at distance rho from the origin, y > 0 (no argument checks).
  double radial(double rho, double y) const;
  /// Mass of P^a_1 outside the ball of radius u.
  double tail_mass(double u) const;

 private:
  Params params_;
  double beta_;
  double C_;
};

/// P^a_y(x); throws std::invalid_argument for y <= 0.
double poisson_kernel(const ExtensionKernel& k, const Point& x, double y);

/// v(x, y) = (P^a_{|y|} * f)(x), the even reflection of the extension; f(x)
/// at y = 0. The error estimate bounds the truncated far field. Throws
/// RejectedField when f is outside the admissible growth class and
/// ToleranceNotMet when the far field cannot be bounded by `tol`.
Estimate extend(const ExtensionKernel& k, const ScalarField& f, const Point& x, double y,
                double tol = 1e-9);

}  // namespace fracmv
