#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fracmv/field.hpp"
#include "fracmv/mvkernel.hpp"

namespace fracmv {

enum class DomainKind { ball, box, interval, polygon };

/// Bounded region D of R^n with its boundary distance delta(x). The extension
/// height (the half-thickness of D x (-d, d)) is the diameter of D.
class Domain {
 public:
  static Domain ball(const Point& center, double radius);
  /// Axis-aligned box [lo, hi]; in one dimension this is an interval.
  static Domain box(const Point& lo, const Point& hi);
  static Domain interval(double lo, double hi);
  /// Simple polygon in the plane, vertices in order (either orientation).
  static Domain polygon(std::vector<Point> vertices);

  DomainKind kind() const { return kind_; }
  int n() const { return n_; }
  bool contains(const Point& x) const;
  /// delta(x) for interior x, zero on the boundary and outside.
  double distance_to_boundary(const Point& x) const;
  double diameter() const;
  double extension_height() const { return diameter(); }
  /// sup of |x| over D.
  double extent() const;
  /// `count` deterministic interior points with delta(x) >= 0.1 * diameter.
  std::vector<Point> interior_points(int count, std::uint64_t seed = 1) const;

  /// Interior quadrature: composite Gauss-Legendre on intervals and boxes,
  /// polar Gauss-Legendre on balls, and the bounding-box rule restricted to
  /// the polygon otherwise. `panels` sets the resolution per direction.
  void quadrature(int panels, std::vector<Point>& nodes, std::vector<double>& weights) const;

  std::string describe() const;

 private:
  Domain() = default;
  /// Unsigned distance to the boundary set.
  double boundary_distance(const Point& x) const;
  DomainKind kind_ = DomainKind::interval;
  int n_ = 1;
  Point a_;
  Point b_;
  double radius_ = 0.0;
  std::vector<Point> vertices_;
};

double distance_to_boundary(const Domain& domain, const Point& x);

/// Finite family of balls containing x used for maximal functions: radii
/// r_max / ratio^k down to r_min, centres x + t rho e for t in `offsets` and
/// e in the 2n axis directions; ball averages by midpoint rule.
struct BallFamily {
  double r_min = 1e-3;
  double r_max = 8.0;
  double ratio = 1.4142135623730951;
  std::vector<double> offsets{0.0, 0.5, 0.9};
  int resolution = 32;

  std::vector<double> radii() const;
};

/// sup over the family of |B|^{-1-lambda/n} int_B |f(y) - f(x)| dy.
double sharp_maximal(const ScalarField& f, const Point& x, double lambda,
                     const BallFamily& family = {});

/// The same supremum for several lambda from one pass over the family.
std::vector<double> sharp_maximal(const ScalarField& f, const Point& x,
                                  const std::vector<double>& lambdas, const BallFamily& family = {});

/// sup over the family of the average of |f| on B.
double hl_maximal(const ScalarField& f, const Point& x, const BallFamily& family = {});

struct GradientEstimate {
  Point value;
  double error = 0.0;
};

/// grad f(x) = (1/r) int (f(z) - f(x)) Psi_r(x - z) dz with Psi_r(w) = r^{-n} Psi(w/r),
/// valid when f is s-harmonic on B(x, r') for some r' > r.
GradientEstimate gradient_of_solution(const RadialKernelTable& table, const ScalarField& f,
                                      const Point& x, double r,
                                      const ConvolutionOptions& options = {});

struct RegularityParams {
  double lambda = 0.5;
  double p = 2.0;
  /// Reporting only: 1/tau = 1/p + alpha/n.
  double alpha = 0.25;

  double tau(int n) const;
  void validate() const;
};

struct Lemma33Sample {
  Point x;
  double factor = 0.0;
  double r = 0.0;
  double gradient_norm = 0.0;
  double sharp = 0.0;
  double ratio = 0.0;
};

struct Lemma33Report {
  double lambda = 0.0;
  std::vector<Lemma33Sample> samples;
  /// A nonzero gradient met a vanishing sharp maximal function.
  bool violation = false;

  double max_ratio(double factor) const;
  double median_ratio(double factor) const;
};

/// |grad f(x)| / (r^{lambda-1} M^{#,lambda} f(x)) for r = factor * delta(x).
Lemma33Report lemma33_ratio(const RadialKernelTable& table, const ScalarField& f,
                            const Domain& domain, double lambda, const std::vector<Point>& grid,
                            const std::vector<double>& factors, const BallFamily& family = {});

/// One report per lambda; gradients and ball integrals are shared.
std::vector<Lemma33Report> lemma33_ratio(const RadialKernelTable& table, const ScalarField& f,
                                         const Domain& domain, const std::vector<double>& lambdas,
                                         const std::vector<Point>& grid,
                                         const std::vector<double>& factors,
                                         const BallFamily& family = {});

/// Integration window of the difference seminorm: |h| <= h_max split into
/// `shells` dyadic shells, x in [-W, W]^n split into `x_panels` panels per axis.
struct BesovWindow {
  double h_max = 1.0;
  double W = 4.0;
  int shells = 24;
  int h_nodes = 6;
  int x_panels = 64;
  int x_nodes = 6;
};

struct BesovResult {
  double value = 0.0;
  /// Contribution of each dyadic shell, outermost first.
  std::vector<double> shells;
  bool divergence_warning = false;
};

/// (int int_{|h| <= h_max} |f(x+h) - f(x)|^p / |h|^{n + lambda p} dh dx)^{1/p}.
BesovResult besov_seminorm(const ScalarField& f, double lambda, double p,
                           const BesovWindow& window = {});

/// (int_W |f|^p dx)^{1/p} on the same x-window.
double lp_norm(const ScalarField& f, double p, const BesovWindow& window = {});

struct Lemma32Result {
  double weighted_gradient = 0.0;
  double besov = 0.0;
  double lp = 0.0;
  double ratio = 0.0;
  bool besov_divergent = false;
};

/// (int_D |delta^{1-lambda} grad f|^p)^{1/p} / (besov + L^p norm), with the
/// gradient at r = delta(x)/2. `panels` sets the interior grid.
Lemma32Result lemma32_ratio(const RadialKernelTable& table, const ScalarField& f,
                            const Domain& domain, double lambda, double p, int panels = 16,
                            const BesovWindow& window = {});

/// One CSV row: field_id, x, r, lambda, p, value, kind. NaN numbers print as
/// empty cells.
struct ReportRow {
  std::string field_id;
  std::string x;
  double r = std::numeric_limits<double>::quiet_NaN();
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double p = std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  std::string kind;
};

std::string format_point(const Point& x);
std::string csv_header();
std::string csv_line(const ReportRow& row);

}  // namespace fracmv
