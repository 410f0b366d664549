#include "fracmv/extension.hpp"

#include <cmath>
#include <string>

#include "fracmv/numerics.hpp"
#include "fracmv/polar.hpp"

namespace fracmv {

namespace {

constexpr double kSplit = 4.0;

// int_lo^hi rho^{n-1} (1 + rho^2)^{-beta/2} drho on panels of width <= 1/4
double radial_mass(int n, double beta, double lo, double hi) {
  if (hi <= lo) return 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) * 4.0)));
  std::vector<double> nodes;
  std::vector<double> weights;
  for (int p = 0; p < panels; ++p)
    append_panel(nodes, weights, lo + (hi - lo) * p / panels, lo + (hi - lo) * (p + 1) / panels,
                 20);
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    sum += weights[k] * std::pow(nodes[k], n - 1) * std::pow(1.0 + nodes[k] * nodes[k], -0.5 * beta);
  return sum;
}

// int_u^inf rho^{n-1} (1 + rho^2)^{-beta/2} drho for u >= 2, from the binomial
// expansion of (1 + rho^{-2})^{-beta/2}
double radial_tail(int n, double beta, double u) {
  double sum = 0.0;
  double binom = 1.0;
  for (int k = 0; k < 60; ++k) {
    const double term = binom * std::pow(u, n - beta - 2.0 * k) / (beta + 2.0 * k - n);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    binom *= (-0.5 * beta - k) / (k + 1.0);
  }
  return sum;
}

double raw_tail(int n, double beta, double u) {
  if (u >= 2.0) return radial_tail(n, beta, u);
  return radial_mass(n, beta, u, 2.0) + radial_tail(n, beta, 2.0);
}

}  // namespace

double poisson_constant(int n, double a) {
  const Params p = Params::from_a(n, a);
  const double beta = p.n() + 1.0 - p.a();
  const double total = radial_mass(p.n(), beta, 0.0, kSplit) + radial_tail(p.n(), beta, kSplit);
  const double C = 1.0 / (sphere_area(p.n()) * total);
  // cross-check with a shifted split; both partitions must agree
  const double alt = radial_mass(p.n(), beta, 0.0, 2.0 * kSplit) +
                     radial_tail(p.n(), beta, 2.0 * kSplit);
  const double residual = std::abs(alt - total) / total;
  if (residual > 1e-12) throw NormalizationFailure("Poisson constant did not converge", residual);
  return C;
}

ExtensionKernel::ExtensionKernel(const Params& params)
    : params_(params),
      beta_(params.n() + 1.0 - params.a()),
      C_(poisson_constant(params.n(), params.a())) {}

double ExtensionKernel::radial(double rho, double y) const {
  // (rho^2 + y^2)^{-beta/2} through logs so that huge rho does not underflow early
  const double big = std::max(rho, y);
  const double small = std::min(rho, y) / big;
  return C_ * std::exp((1.0 - a()) * std::log(y) - beta_ * std::log(big) -
                       0.5 * beta_ * std::log1p(small * small));
}

double ExtensionKernel::tail_mass(double u) const {
  if (u <= 0.0) return 1.0;
  return sphere_area(n()) * C_ * raw_tail(n(), beta_, u);
}

double poisson_kernel(const ExtensionKernel& k, const Point& x, double y) {
  if (!(y > 0.0)) throw std::invalid_argument("poisson_kernel: y must be positive");
  if (x.n != k.n()) throw std::invalid_argument("poisson_kernel: dimension mismatch");
  return k.radial(x.norm(), y);
}

Estimate extend(const ExtensionKernel& k, const ScalarField& f, const Point& x, double y,
                double tol) {
  if (f.n != k.n() || x.n != k.n()) throw std::invalid_argument("extend: dimension mismatch");
  const double fx = f(x);
  if (y == 0.0) return {fx, 0.0};
  const double h = std::abs(y);
  const double two_s = 2.0 * k.s();
  if (!f.support && !(f.growth.degree < two_s))
    throw RejectedField("extend: field '" + f.description + "' grows like |x|^" +
                        std::to_string(f.growth.degree) + ", outside L^1(dx/(1+|x|)^{n+2s})");

  double cutoff = 0.0;
  double tail_error = 0.0;
  if (f.support) {
    cutoff = support_reach(f, x);
  } else {
    // |f(x+z) - f(x)| <= (B 2^d + |f(x)|) rho^d once rho >= 1 + |x|
    const double d = std::max(f.growth.degree, 0.0);
    const double K = sphere_area(k.n()) * k.C() * std::pow(h, two_s) *
                     (f.growth.bound * std::pow(2.0, d) + std::abs(fx)) / (two_s - d);
    constexpr double kMaxCutoff = 1e30;
    cutoff = std::max({1.0 + x.norm(), 64.0 * h, std::pow(K / tol, 1.0 / (two_s - d))});
    if (cutoff > kMaxCutoff)
      throw ToleranceNotMet("extend: far-field bound", K * std::pow(kMaxCutoff, d - two_s), tol);
    tail_error = K * std::pow(cutoff, d - two_s);
  }

  RadialLayout layout;
  layout.scale = h;
  layout.core_extent = 4.0;
  layout.core_panels = 16;
  layout.nodes = 10;
  const RadialRule radial = plan_radial(layout, cutoff, &f, x);
  const double area = sphere_area(k.n());
  double sum = 0.0;
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double rho = radial.rho[i];
    const AngularRule ang = angular_rule(x, rho, &f, 64, true);
    double shell = 0.0;
    for (std::size_t j = 0; j < ang.size(); ++j) shell += ang.weight[j] * f(x + ang.direction[j] * rho);
    const double w = radial.weight[i] * std::pow(rho, k.n() - 1) * k.radial(rho, h);
    sum += w * (shell - area * fx);
  }
  if (!std::isfinite(sum)) throw EvaluationError("extend: non-finite field sample");
  // with compact support the far field is exactly -f(x) times the kernel tail
  if (f.support) sum -= fx * k.tail_mass(cutoff / h);
  return {fx + sum, tail_error};
}

}  // namespace fracmv
