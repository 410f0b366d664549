#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fracmv/types.hpp"

namespace fracmv {

enum class WeightKind { plain, even_power };

/// Nodes and positive weights approximating an integral over `[lo, hi]`
/// against either the plain measure or |y|^exponent.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lo = 0.0;
  double hi = 0.0;
  WeightKind weight_kind = WeightKind::plain;
  double exponent = 0.0;

  std::size_t size() const { return nodes.size(); }
  double weight_sum() const;

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * f(nodes[k]);
    return sum;
  }
};

/// Gauss-Legendre rule with `count` nodes on [lo, hi]. Exact for polynomials of
/// degree <= 2*count - 1.
QuadratureRule gauss_legendre(int count, double lo, double hi);

/// Gauss-Jacobi rule for the weight y^a on [0, Y], built by Golub-Welsch.
QuadratureRule gauss_jacobi_half(int count, double a, double Y);

/// Symmetric rule for the weight |y|^a on [-Y, Y]: the `count`-node Gauss-Jacobi
/// rule on [0, Y] reflected through the origin (2*count nodes). Exact for
/// polynomials of degree <= 2*count - 1.
QuadratureRule gauss_even_weight(int count, double a, double Y);

/// How nodes of a panel cluster toward its ends. Grading uses polynomial maps
/// whose derivatives vanish at the graded end(s); this turns an endpoint
/// singularity like t^gamma into a much smoother integrand.
enum class Grading { none, toward_lo, toward_hi, both };

/// Appends a `count`-node Gauss-Legendre panel on [lo, hi] with optional
/// endpoint grading.
void append_panel(std::vector<double>& nodes, std::vector<double>& weights, double lo,
                  double hi, int count, Grading grading = Grading::none);

/// Composite Gauss-Legendre rule with the given sorted breakpoints.
QuadratureRule composite_legendre(std::span<const double> breakpoints, int count_per_panel);

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration. The initial
/// partition is given by `breakpoints` (sorted, at least two entries).
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f,
                                  std::span<const double> breakpoints, double abs_tol,
                                  double rel_tol, int max_intervals = 2000);

/// Integral of g(z, y)|y|^a over the ball of R^{n+1} with the given center
/// (which must lie on the hyperplane y = 0) and radius.
///
/// Slice decomposition: the outer variable is y = R sin(theta), integrated with
/// gauss_even_weight in theta (the weight |sin theta|^a is written as
/// |theta|^a times a smooth factor); each slice is a ball of R^n of radius
/// R cos(theta) whose coordinates are parametrized by sines as well, so the
/// square-root edge of the slice never reaches the integrand. `resolution`
/// is the node count per direction.
double integrate_ball_weighted(const std::function<double(const ExtPoint&)>& g,
                               const ExtPoint& center, double radius, double a,
                               int resolution);

}  // namespace fracmv
