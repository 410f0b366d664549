#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fracmv/analysis.hpp"
#include "fracmv/fraclap.hpp"
#include "fracmv/mvkernel.hpp"
#include "fracmv/numerics.hpp"

namespace fracmv {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

PropertyCheck make_check(std::string id, std::string description, double measured,
                         double threshold, bool passed, std::string detail) {
  PropertyCheck c;
  c.id = std::move(id);
  c.description = std::move(description);
  c.measured = measured;
  c.threshold = threshold;
  c.passed = passed && std::isfinite(measured);
  c.detail = std::move(detail);
  return c;
}

// Least-squares slope of log|g| against log rho over grid nodes in [lo, hi].
double loglog_slope(const std::vector<double>& rho, const std::vector<double>& g, double lo,
                    double hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] < lo || rho[i] > hi || g[i] == 0.0) continue;
    const double x = std::log(rho[i]);
    const double y = std::log(std::abs(g[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// Consecutive ratios of rho^beta |g(rho)| at rho = 4, 8, ..., 64; the most extreme is returned.
double worst_ratio(double beta, double (*eval)(const RadialKernelTable&, double),
                   const RadialKernelTable& table) {
  double worst = 1.0;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (double rho = 4.0; rho <= 64.0; rho *= 2.0) {
    const double v = std::pow(rho, beta) * std::abs(eval(table, rho));
    if (std::isfinite(prev)) {
      const double q = v / prev;
      if (!(q >= 0.5 && q <= 2.0) || std::abs(std::log(q)) > std::abs(std::log(worst))) worst = q;
    }
    prev = v;
  }
  return worst;
}

double eval_phi(const RadialKernelTable& t, double rho) { return t.phi(rho); }
double eval_psi(const RadialKernelTable& t, double rho) { return t.phi_prime(rho); }

// sup over the nodes of max(|Phi''|, |Phi'/rho|), with Phi'' from three-point
// differences of the tabulated Phi' using every `stride`-th node.
double grad_psi_sup(const std::vector<double>& rho, const std::vector<double>& dphi, std::size_t stride) {
  double sup = 0.0;
  for (std::size_t i = stride; i + stride < rho.size(); i += stride) {
    const double h0 = rho[i] - rho[i - stride];
    const double h1 = rho[i + stride] - rho[i];
    const double second = (dphi[i + stride] - dphi[i]) * h0 / (h1 * (h0 + h1)) +
                          (dphi[i] - dphi[i - stride]) * h1 / (h0 * (h0 + h1));
    sup = std::max({sup, std::abs(second), std::abs(dphi[i] / rho[i])});
  }
  return sup;
}

}  // namespace

bool PropertyReport::all_passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

PropertyReport verify_kernel_properties(const RadialKernelTable& table, const PropertyOptions& options) {
  PropertyReport report;
  const Params& params = table.params();
  const int n = params.n();
  const double a = params.a();
  const std::vector<double>& rho = table.rho();
  const std::vector<double>& phi = table.phi_values();
  const std::vector<double>& dphi = table.psi_profile();

  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (std::isfinite(rho[i]) && std::isfinite(phi[i]) && std::isfinite(dphi[i])) continue;
    const std::string detail = fmt("non-finite table entry at rho=%.17g", rho[i]);
    for (const char* id : {"a", "b", "c", "d", "e", "f", "g"})
      report.checks.push_back(make_check(id, "table entries finite",
                                         std::numeric_limits<double>::quiet_NaN(), 0.0, false, detail));
    return report;
  }
  const double phi0 = table.phi(0.0);

  // (a) radiality
  if (options.check_radiality) {
    const BumpProfile profile = table.profile();
    const ExtensionKernel k(params);
    constexpr double probe = 0.5;
    double v1, v2;
    if (n == 1) {
      v1 = phi_fixed_axis(profile, k, Point(probe));
      v2 = phi_fixed_axis(profile, k, Point(-probe));
    } else {
      v1 = phi_fixed_axis(profile, k, Point(probe, 0.0));
      v2 = phi_fixed_axis(profile, k, Point(0.6 * probe, 0.8 * probe));
    }
    const double dev = std::max(std::abs(v1 - v2), std::abs(v1 - table.phi(probe))) / phi0;
    report.checks.push_back(make_check(
        "a", n == 1 ? "Phi is even" : "Phi is radial", dev, 1e-6, dev <= 1e-6,
        fmt("fixed-axis values %.12g and %.12g, table %.12g", v1, v2, table.phi(probe))));
  } else {
    report.checks.push_back(make_check("a", "radiality", 0.0, 1e-6, true, "skipped"));
  }

  // (b) (1 + rho)^{n+1-a} |Phi| bounded
  {
    const double beta = n + 1.0 - a;
    const double slope = loglog_slope(rho, phi, 2.0, 16.0);
    const double worst = worst_ratio(beta, eval_phi, table);
    const bool ok = std::abs(slope + beta) <= 0.1 && worst >= 0.5 && worst <= 2.0;
    report.checks.push_back(make_check(
        "b", "Phi decays like |x|^-(n+1-a)", slope, -beta, ok,
        fmt("fitted slope on [2,16] %.4f vs %.4f; worst consecutive ratio %.4f", slope, -beta, worst)));
  }

  // (c) unit mass
  {
    const double dev = std::abs(table.mass() - 1.0);
    report.checks.push_back(make_check("c", "int Phi = 1", dev, 1e-4, dev <= 1e-4,
                                       fmt("mass %.15g", table.mass())));
  }

  // (d) sup_r |Phi_r * f|(x) <= c Mf(x) on the gaussian field
  {
    const ScalarField f = make_field("gaussian", params, 1);
    std::vector<Point> points;
    if (n == 1)
      points = {Point(0.0), Point(0.4), Point(1.2)};
    else
      points = {Point(0.0, 0.0), Point(0.4, 0.2), Point(1.2, -0.3)};
    const int m = std::max(2, options.maximal_radii);
    BallFamily coarse;
    BallFamily fine;
    fine.ratio = std::pow(2.0, 0.25);
    fine.offsets = {0.0, 0.25, 0.5, 0.75, 0.9};
    fine.resolution = 2 * coarse.resolution;
    double c_coarse = 0.0;
    double c_fine = 0.0;
    for (const Point& x : points) {
      double sup = 0.0;
      for (int k = 0; k < m; ++k) {
        const double r = 0.05 * std::pow(16.0, static_cast<double>(k) / (m - 1));
        sup = std::max(sup, std::abs(phi_r_convolve(table, f, x, r).value));
      }
      c_coarse = std::max(c_coarse, sup / hl_maximal(f, x, coarse));
      c_fine = std::max(c_fine, sup / hl_maximal(f, x, fine));
    }
    const double change = std::abs(c_fine - c_coarse) / c_coarse;
    report.checks.push_back(make_check(
        "d", "sup_r |Phi_r*f| <= c Mf", c_coarse, 0.2, std::isfinite(c_coarse) && change <= 0.2,
        fmt("c=%.6g, c under family refinement %.6g (change %.3g)", c_coarse, c_fine, change)));
  }

  // (e) Psi(0) = 0 and int Psi = 0
  {
    const double at_zero = std::abs(table.phi_prime(0.0));
    // odd symmetry makes int Psi^i vanish; the radial identity int_0^inf Phi' = -Phi(0)
    // checks that the tabulated Psi integrates consistently with Phi
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < rho.size(); ++i)
      integral += gauss_legendre(4, rho[i], rho[i + 1]).integrate([&](double t) { return table.phi_prime(t); });
    const double R = rho.back();
    const double beta = table.beta();
    integral += -table.tail_c0() * std::pow(R, -beta) - table.tail_c2() * std::pow(R, -beta - 2.0);
    const double mean_dev = std::abs(integral + phi0);
    const bool ok = at_zero <= 1e-6 && mean_dev <= 1e-4;
    report.checks.push_back(make_check(
        "e", "Psi(0) = 0 and int Psi = 0", std::max(at_zero, mean_dev), 1e-4, ok,
        fmt("|Psi(0)| %.3g; |int_0^inf Phi' + Phi(0)| %.3g", at_zero, mean_dev)));
  }

  // (f) |Psi| decays like |x|^-(n+2-a)
  {
    const double beta = n + 2.0 - a;
    const double slope = loglog_slope(rho, dphi, 2.0, 16.0);
    const double worst = worst_ratio(beta, eval_psi, table);
    const bool ok = std::abs(slope + beta) <= 0.1 && worst >= 0.5 && worst <= 2.0;
    report.checks.push_back(make_check(
        "f", "Psi decays like |x|^-(n+2-a)", slope, -beta, ok,
        fmt("fitted slope on [2,16] %.4f vs %.4f; worst consecutive ratio %.4f", slope, -beta, worst)));
  }

  // (g) grad Psi bounded
  {
    const double fine = grad_psi_sup(rho, dphi, 1);
    const double coarse = grad_psi_sup(rho, dphi, 2);
    const double change = std::abs(fine - coarse) / fine;
    report.checks.push_back(make_check(
        "g", "grad Psi bounded", fine, 0.1, std::isfinite(fine) && change <= 0.1,
        fmt("sup %.6g on the grid, %.6g on every other node (change %.3g)", fine, coarse, change)));
  }
  return report;
}

}  // namespace fracmv
