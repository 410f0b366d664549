#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracmv/types.hpp"

namespace fracmv {

/// A sphere of R^n across which a field may fail to be smooth. A radius of
/// zero denotes an isolated point. `graded` asks quadrature to cluster nodes
/// toward the sphere (for singularities like dist^s); when false the field is
/// only finitely smooth there and a panel break suffices.
struct SingularSphere {
  Point center;
  double radius = 0.0;
  bool graded = true;
};

/// Far-field envelope |f(x)| <= bound * (1 + |x|)^degree.
struct Growth {
  double degree = 0.0;
  double bound = 1.0;
};

/// An evaluatable real function on R^n plus the structural hints quadrature
/// needs: where it is nonsmooth, where it vanishes identically, and the length
/// scale of its features.
struct ScalarField {
  using Evaluator = std::function<double(const Point&)>;
  using Extension = std::function<double(const Point&, double)>;

  int n = 1;
  Evaluator eval;
  Growth growth;
  /// Envelope of |f(x+z) + f(x-z) - 2f(x)| in |z| when sharper than `growth`
  /// (zero for affine fields).
  std::optional<Growth> second_difference;
  std::string description;

  std::vector<SingularSphere> singular;
  /// f vanishes outside this ball when set.
  std::optional<SingularSphere> support;
  /// Features live inside B(0, structure_radius); beyond it f is slowly varying.
  double structure_radius = 0.0;
  double feature_scale = 1.0;
  /// Rough sup of |f| over the region of interest; used to scale tolerances.
  double scale = 1.0;

  /// Ball on which f is s-harmonic, when known.
  std::optional<SingularSphere> harmonic_ball;
  /// Closed-form extension (x, y) -> v(x, y), when known.
  Extension closed_form_extension;

  double operator()(const Point& x) const { return eval(x); }
};

}  // namespace fracmv
