#pragma once

#include "fracmv/types.hpp"

namespace fracmv {

/// Unnormalized bump exp(-1/((t-1/4)(3/4-t))) on (1/4, 3/4), zero elsewhere.
double eta_raw(double t);
/// Derivative of eta_raw.
double eta_raw_prime(double t);

/// Gradient of a function on R^{n+1}: x-part and y-part.
struct ExtVector {
  Point x;
  double y = 0.0;
};

/// Radial test profile phi(X) = kappa * eta_raw(|X|), normalized so that
/// the integral of phi |y|^a over R^{n+1} equals one, together with the
/// potential psi(X) = zeta(|X|) whose gradient is phi(X) X.
class BumpProfile {
 public:
  int n() const { return n_; }
  double a() const { return a_; }
  double kappa() const { return kappa_; }
  /// A = int_0^inf rho eta(rho) drho for the normalized eta.
  double A() const { return A_; }
  /// Difference between the two finest normalization passes.
  double normalization_residual() const { return residual_; }

  /// kappa * eta_raw(rho); throws std::invalid_argument for rho < 0.
  double eta(double rho) const;
  double eta_prime(double rho) const;
  double phi(const ExtPoint& X) const { return kappa_ * eta_raw(X.norm()); }
  /// zeta(t) = int_0^t rho eta(rho) drho - A.
  double zeta(double t) const;
  double psi(const ExtPoint& X) const { return zeta(X.norm()); }
  /// phi(X) X.
  ExtVector grad_psi(const ExtPoint& X) const;

  /// Rebuilds a profile from a stored normalizer (used when loading tables).
  static BumpProfile from_kappa(int n, double a, double kappa);

 private:
  friend BumpProfile normalize(int n, double a);
  BumpProfile(int n, double a, double kappa, double residual);

  int n_;
  double a_;
  double kappa_;
  double A_ = 0.0;
  double residual_ = 0.0;
};

/// Resolution of the ball rule that fixes kappa.
inline constexpr int kNormalizationResolution = 384;

/// Computes kappa with integrate_ball_weighted at kNormalizationResolution and
/// half of it; throws NormalizationFailure when the two differ by more than
/// 1e-9 relative.
BumpProfile normalize(int n, double a);

}  // namespace fracmv
