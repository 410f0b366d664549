#pragma once

#include <vector>

#include "fracmv/field.hpp"
#include "fracmv/numerics.hpp"

namespace fracmv {

// Polar quadrature around a point x: integrals over R^n are written as
//   int_0^R rho^{n-1} k(rho) [ int_{S^{n-1}} F(x + rho sigma) dsigma ] drho
// with a radial rule adapted to the kernel scale and a spherical rule adapted
// to where the circle |z - x| = rho crosses the field's singular spheres.

/// Layout of the radial panels: uniform panels on [0, core_extent*scale],
/// geometric growth beyond, refined near the field's singular radii.
struct RadialLayout {
  double scale = 1.0;
  double core_extent = 2.0;
  int core_panels = 16;
  double ratio = 1.25;
  int nodes = 8;
  /// When set, the first panel uses Gauss-Jacobi nodes for rho^exponent and
  /// the weights absorb that factor (the integrand is then divided by nothing).
  bool jacobi_first = false;
  double jacobi_exponent = 0.0;
};

struct RadialRule {
  std::vector<double> rho;
  std::vector<double> weight;
  std::size_t size() const { return rho.size(); }
};

/// Radial nodes on [0, cutoff]. `field` may be null (smooth integrand).
RadialRule plan_radial(const RadialLayout& layout, double cutoff, const ScalarField* field,
                       const Point& x);

/// Unit directions and weights on S^{n-1}; sums of weights equal |S^{n-1}|.
struct AngularRule {
  std::vector<Point> direction;
  std::vector<double> weight;
  std::size_t size() const { return weight.size(); }
};

/// Spherical rule for the circle |z - x| = rho. For n = 1 this is {+1, -1}.
/// For n = 2 it is a periodic trapezoid rule when the circle avoids every
/// singular sphere of `field`, and graded Gauss-Legendre arcs between crossing
/// angles otherwise. `symmetric` adds the antipodal breakpoints so that both
/// sigma and -sigma are handled.
AngularRule angular_rule(const Point& x, double rho, const ScalarField* field, int base_nodes,
                         bool symmetric = false);

/// Largest distance from x at which `field` can be nonzero, or +inf.
double support_reach(const ScalarField& field, const Point& x);

}  // namespace fracmv
