#include "fracmv/profile.hpp"

#include <algorithm>
#include <cmath>

#include "fracmv/numerics.hpp"

namespace fracmv {

namespace {

constexpr double kLo = 0.25;
constexpr double kHi = 0.75;

// int_{1/4}^{t} rho eta_raw(rho) drho by panels of width at most 1/32
double raw_moment(double t) {
  const double hi = std::min(t, kHi);
  if (hi <= kLo) return 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - kLo) * 32.0)));
  std::vector<double> nodes;
  std::vector<double> weights;
  for (int p = 0; p < panels; ++p)
    append_panel(nodes, weights, kLo + (hi - kLo) * p / panels, kLo + (hi - kLo) * (p + 1) / panels,
                 20);
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * nodes[k] * eta_raw(nodes[k]);
  return sum;
}

}  // namespace

double eta_raw(double t) {
  if (t <= kLo || t >= kHi) return 0.0;
  return std::exp(-1.0 / ((t - kLo) * (kHi - t)));
}

double eta_raw_prime(double t) {
  if (t <= kLo || t >= kHi) return 0.0;
  const double q = (t - kLo) * (kHi - t);
  return std::exp(-1.0 / q) * (1.0 - 2.0 * t) / (q * q);
}

BumpProfile::BumpProfile(int n, double a, double kappa, double residual)
    : n_(n), a_(a), kappa_(kappa), residual_(residual) {
  A_ = kappa_ * raw_moment(kHi);
}

BumpProfile BumpProfile::from_kappa(int n, double a, double kappa) {
  const Params p = Params::from_a(n, a);
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("bump profile normalizer must be positive");
  return BumpProfile(p.n(), p.a(), kappa, 0.0);
}

double BumpProfile::eta(double rho) const {
  if (rho < 0.0) throw std::invalid_argument("eta: rho must be nonnegative");
  return kappa_ * eta_raw(rho);
}

double BumpProfile::eta_prime(double rho) const {
  if (rho < 0.0) throw std::invalid_argument("eta_prime: rho must be nonnegative");
  return kappa_ * eta_raw_prime(rho);
}

double BumpProfile::zeta(double t) const {
  if (t < 0.0) throw std::invalid_argument("zeta: t must be nonnegative");
  if (t >= kHi) return 0.0;
  return kappa_ * raw_moment(t) - A_;
}

ExtVector BumpProfile::grad_psi(const ExtPoint& X) const {
  const double f = phi(X);
  return {X.x * f, X.y * f};
}

BumpProfile normalize(int n, double a) {
  const Params p = Params::from_a(n, a);
  const ExtPoint origin{Point::zero(p.n()), 0.0};
  auto mass = [&](int resolution) {
    return integrate_ball_weighted([](const ExtPoint& X) { return eta_raw(X.norm()); }, origin,
                                   1.0, p.a(), resolution);
  };
  const double coarse = mass(kNormalizationResolution / 2);
  const double fine = mass(kNormalizationResolution);
  const double residual = std::abs(fine - coarse) / fine;
  if (residual < 1e-9) return BumpProfile(p.n(), p.a(), 1.0 / fine, residual);
  throw NormalizationFailure("bump normalization did not converge", residual);
}

}  // namespace fracmv
