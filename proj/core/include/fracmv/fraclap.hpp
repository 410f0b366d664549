#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracmv/extension.hpp"
#include "fracmv/field.hpp"

namespace fracmv {

struct GrowthCheck {
  bool admissible = false;
  /// Quadrature estimate of int_{|x| <= 1e4} |f| / (1 + |x|)^{n+2s} dx.
  double integral = 0.0;
  /// Bound on the same integral over |x| > 1e4 from the declared growth.
  double tail_bound = 0.0;
  /// The declared envelope held at |x| in {10, 100, 1000} up to a factor 10.
  bool envelope_consistent = false;
};

/// Whether f lies in L^1(R^n, dx/(1+|x|)^{n+2s}).
GrowthCheck growth_class_check(const ScalarField& f, double s, int n);

/// -(1/2) int (f(x+z) + f(x-z) - 2 f(x)) / |z|^{n+2s} dz, i.e. the fractional
/// Laplacian without its normalizing constant. The error estimate bounds the
/// truncated far field; throws ToleranceNotMet when that exceeds `tol`.
Estimate frac_lap(const ScalarField& f, const Point& x, double s, double tol = 1e-7);

/// c so that c ((r^2-|x|^2)/(|ybar|^2-r^2))^s |x-ybar|^{-n} has unit mass at x = 0,
/// by Gauss-Jacobi quadrature of the radial profile.
double ball_poisson_constant(int n, double s);

/// Poisson kernel of the ball B(0, r) for the fractional Laplacian of order s.
/// Requires |x| < r < |ybar|.
double ball_poisson_kernel(const Point& x, const Point& ybar, double r, double s);

/// A bump A (1 - |y - center|^2/width^2)_+^4 of exterior data.
struct ExteriorBump {
  Point center;
  double width = 0.0;
  double amplitude = 1.0;
};

/// Exterior data g supported in r < |ybar| <= outer. When `bumps` is set, g is
/// their sum and each bump is integrated in its own polar coordinates;
/// otherwise `g` is integrated over the whole shell.
struct ExteriorData {
  ScalarField::Evaluator g;
  double outer = 0.0;
  std::vector<SingularSphere> singular;
  std::vector<ExteriorBump> bumps;
};

/// The s-harmonic function in B(0, r) with exterior values g: the ball Poisson
/// integral inside, g outside.
ScalarField sample_sharmonic(const ExteriorData& data, double r, double s, int n);

// Registry of built-in test fields.

ScalarField constant_field(int n, double value = 1.0);
/// offset + gradient . x
ScalarField affine_field(const Point& gradient, double offset = 0.0);
/// amplitude * exp(-|x - center|^2 / width^2)
ScalarField gaussian_field(const Point& center, double width = 0.5, double amplitude = 1.0);
/// max(x, 0)^s on the line.
ScalarField xplus_field(double s);
/// max(x, 0)^s times a smooth cutoff equal to one on |x| <= 1 and zero for |x| >= 2.
ScalarField xplus_cut_field(double s);
/// Three random exterior bumps in 1.5r <= |center| <= 3.3r of width 0.2r,
/// amplitudes scaled so that the kernel-weighted amplitude sum at the centre is one.
ScalarField ball_poisson_field(int n, double s, std::uint64_t seed, double r = 1.0);
/// |x - pole|^{2s-n} (log|x - pole| when 2s = n): s-harmonic away from the pole,
/// with the closed-form extension (|x - pole|^2 + y^2)^{(2s-n)/2}.
ScalarField riesz_field(int n, double s, const Point& pole);

/// Builds a registry field by key: constant, affine, gaussian, xplus_s,
/// ball_poisson, riesz. Throws std::invalid_argument for unknown keys.
ScalarField make_field(const std::string& key, const Params& params, std::uint64_t seed = 1);
const std::vector<std::string>& field_keys();

}  // namespace fracmv
