#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracmv/extension.hpp"
#include "fracmv/field.hpp"
#include "fracmv/profile.hpp"

namespace fracmv {

/// Resolution of the triple quadrature behind Phi(rho).
///
/// Phi(rho) = 2 int_0^{3/4} y^a int_{t1(y)}^{t2(y)} phi(t, y) t^{n-1} A(rho, t, y) dt dy, where
/// A is the integral of P^a_y(rho e_1 - t sigma) over sigma in S^{n-1}. The y-range
/// is split into a Gauss-Jacobi panel at the origin, dyadic panels and uniform
/// panels; the t-range into panels of width `t_step` plus a dyadic cluster of
/// width y around t = rho where the Poisson kernel peaks. For n = 2 the angular
/// integral uses sin(theta/2) = (D/sqrt(E)) sinh(v), which flattens the peak at
/// theta = 0 (D^2 = (rho-t)^2 + y^2, E = 4 rho t).
struct KernelResolution {
  int y_nodes = 8;
  int y_dyadic = 8;
  double y_step = 3.0 / 32.0;
  int t_nodes = 8;
  double t_step = 1.0 / 16.0;
  int angle_nodes = 8;

  /// Every node count increased by about half, used for error estimates.
  KernelResolution refined() const;
  std::string describe() const;
};

struct KernelValue {
  double phi = 0.0;
  /// Radial derivative Phi'(rho).
  double phi_prime = 0.0;
};

/// Phi and Phi' at radius rho, computed together.
KernelValue kernel_radial(const BumpProfile& profile, const ExtensionKernel& k, double rho,
                          const KernelResolution& res = {});

/// Phi(x), with the difference from a refined pass as error estimate; throws
/// ToleranceNotMet when that difference exceeds `tol` (relative to Phi(0)).
Estimate phi_pointwise(const BumpProfile& profile, const ExtensionKernel& k, const Point& x,
                       double tol = 1e-7);

/// Phi(x) evaluated without using radial symmetry: the z-integral is carried
/// out in absolute angles by adaptive Gauss-Kronrod, so comparing points on
/// different axes is a genuine test of radiality. Slow.
double phi_fixed_axis(const BumpProfile& profile, const ExtensionKernel& k, const Point& x,
                      double tol = 1e-10);

/// Radial grid: `uniform_intervals` equal steps on [0, uniform_end] followed by
/// `geometric_intervals` geometric steps on [uniform_end, end].
struct GridSpec {
  int uniform_intervals = 256;
  double uniform_end = 2.0;
  int geometric_intervals = 64;
  double end = 16.0;

  std::vector<double> nodes() const;
  std::string describe() const;
  static GridSpec parse(const std::string& text);
  bool operator==(const GridSpec&) const = default;
};

/// Tabulated radial profile of the mean-value kernel and of its derivative.
/// Phi'' at the nodes is estimated by five-point differences of Phi'. Between
/// nodes Phi is the quintic Hermite interpolant of (Phi, Phi', Phi'') and Phi'
/// the cubic Hermite interpolant of (Phi', Phi''). Beyond the last node both continue as
/// c0 rho^{-beta} + c2 rho^{-beta-2}, matched to value and slope.
class RadialKernelTable {
 public:
  RadialKernelTable(Params params, double kappa, double poisson_c, GridSpec grid,
                    std::string built_with, std::vector<double> rho, std::vector<double> phi,
                    std::vector<double> phi_prime);

  const Params& params() const { return params_; }
  double kappa() const { return kappa_; }
  double poisson_c() const { return poisson_c_; }
  const GridSpec& grid() const { return grid_; }
  const std::string& built_with() const { return built_with_; }
  const std::vector<double>& rho() const { return rho_; }
  const std::vector<double>& phi_values() const { return phi_; }
  const std::vector<double>& psi_profile() const { return phi_prime_; }
  /// Decay exponent n + 1 - a of Phi.
  double beta() const { return beta_; }
  double tail_c0() const { return c0_; }
  double tail_c2() const { return c2_; }

  double phi(double rho) const;
  /// Signed: phi_prime(-rho) = -phi_prime(rho).
  double phi_prime(double rho) const;
  /// |S^{n-1}| int_0^inf rho^{n-1} Phi drho, exact for the interpolant.
  double mass() const;
  /// Same for |S^{n-1}| int_rho^inf rho^{n-1} Phi(rho) drho.
  double mass_beyond(double rho) const;
  /// |S^{n-1}| int_R^inf rho^{n-1} |Phi'| drho for R beyond the grid.
  double derivative_mass_beyond(double rho) const;

  BumpProfile profile() const { return BumpProfile::from_kappa(params_.n(), params_.a(), kappa_); }

 private:
  std::size_t locate(double rho) const;

  Params params_;
  double kappa_;
  double poisson_c_;
  GridSpec grid_;
  std::string built_with_;
  std::vector<double> rho_;
  std::vector<double> phi_;
  std::vector<double> phi_prime_;
  std::vector<double> phi_second_;
  double beta_;
  double c0_ = 0.0;
  double c2_ = 0.0;
  double uniform_step_ = 0.0;
};

struct BuildOptions {
  GridSpec grid;
  KernelResolution resolution;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Tabulates Phi and Phi' on the grid. Any failing node aborts with its radius.
RadialKernelTable build_table(const Params& params, const BuildOptions& options = {});

/// Text format: header lines n=, a=, grid=, built_with=, kappa=, poisson_c=, then
/// `rho,phi,phi_prime` rows with 17 significant digits.
void write_table(std::ostream& out, const RadialKernelTable& table);
RadialKernelTable read_table(std::istream& in);
void save_table(const std::string& path, const RadialKernelTable& table);
RadialKernelTable load_table(const std::string& path);

/// Accuracy controls for convolutions against the table.
struct ConvolutionOptions {
  double tol = 1e-6;
  int radial_nodes = 10;
  int core_panels = 32;
  int angular_nodes = 64;
};

/// (Phi_r * f)(x) with Phi_r(x) = r^{-n} Phi(x/r). The error estimate bounds
/// the far field beyond the quadrature cutoff.
Estimate phi_r_convolve(const RadialKernelTable& table, const ScalarField& f, const Point& x,
                        double r, const ConvolutionOptions& options = {});

/// Psi^i(x) = Phi'(|x|) x_i/|x|, zero at the origin. `i` is zero-based.
double psi_component(const RadialKernelTable& table, const Point& x, int i);

/// Weighted ball average int phi_r(x - z, -y) v(z, y) |y|^a dz dy over the
/// ball of radius r about (x, 0). At the default resolution v = 1 reproduces
/// the normalization rule exactly.
double extension_mean_value(const BumpProfile& profile,
                            const std::function<double(const ExtPoint&)>& v, const Point& x,
                            double r, int resolution = kNormalizationResolution);

/// One row of the kernel property report.
struct PropertyCheck {
  std::string id;
  std::string description;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string detail;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;
  bool all_passed() const;
};

struct PropertyOptions {
  /// Radiality probe: Phi at a few radii, evaluated off-axis (n = 2) or at -rho (n = 1).
  bool check_radiality = true;
  /// Maximal-domination probe resolution.
  int maximal_radii = 9;
};

/// Checks (a) radiality, (b) decay of Phi, (c) unit mass, (d) maximal
/// domination, (e) Psi(0) = 0 and zero mean, (f) decay of Psi, (g) bounded
/// gradient of Psi.
PropertyReport verify_kernel_properties(const RadialKernelTable& table,
                                        const PropertyOptions& options = {});

}  // namespace fracmv
