#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracmv/mvkernel.hpp"
#include "fracmv/numerics.hpp"

namespace fracmv {

namespace {

constexpr double kInner = 0.25;
constexpr double kOuter = 0.75;

struct Angular {
  double a0;  // int_{S^{n-1}} P_y(rho e_1 - t sigma) dsigma
  double a1;  // same with the weight sigma_1
};

// Angular integrals of the Poisson kernel; `pref` = C y^{1-a}.
Angular angular_1d(const ExtensionKernel& k, double pref, double rho, double t, double y) {
  const double beta = k.beta();
  const double minus = pref * std::pow((rho - t) * (rho - t) + y * y, -0.5 * beta);
  const double plus = pref * std::pow((rho + t) * (rho + t) + y * y, -0.5 * beta);
  return {minus + plus, minus - plus};
}

Angular angular_2d(const ExtensionKernel& k, double pref, double rho, double t, double y,
                   const std::vector<double>& gl_u, const std::vector<double>& gl_w) {
  const double beta = k.beta();
  const double D2 = (rho - t) * (rho - t) + y * y;
  const double E = 4.0 * rho * t;
  constexpr double pi = std::numbers::pi;
  if (E <= 1e-14 * D2) return {2.0 * pi * pref * std::pow(D2, -0.5 * beta), 0.0};

  const double D = std::sqrt(D2);
  const double q = D / std::sqrt(E);
  double s0 = 0.0;
  double s1 = 0.0;
  // [0, pi/2]: sin(theta/2) = q sinh(v), v in [0, V]
  const double V = std::asinh(1.0 / (std::sqrt(2.0) * q));
  const int panels = std::max(1, static_cast<int>(std::ceil(V)));
  const double width = V / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = p * width;
    for (std::size_t j = 0; j < gl_u.size(); ++j) {
      const double v = lo + width * gl_u[j];
      const double sh = q * std::sinh(v);
      const double ch = std::cosh(v);
      const double half_cos = std::sqrt(std::max(0.0, 1.0 - sh * sh));
      const double cos_theta = 1.0 - 2.0 * sh * sh;
      const double f = std::pow(D * ch, -beta) * 2.0 * q * ch / half_cos;
      const double w = width * gl_w[j];
      s0 += w * f;
      s1 += w * f * cos_theta;
    }
  }
  // [pi/2, pi]: the kernel is smooth and bounded there
  for (std::size_t j = 0; j < gl_u.size(); ++j) {
    const double theta = 0.5 * pi + 0.5 * pi * gl_u[j];
    const double sh = std::sin(0.5 * theta);
    const double f = std::pow(D2 + E * sh * sh, -0.5 * beta);
    const double w = 0.5 * pi * gl_w[j];
    s0 += w * f;
    s1 += w * f * std::cos(theta);
  }
  return {2.0 * pref * s0, 2.0 * pref * s1};
}

}  // namespace

KernelResolution KernelResolution::refined() const {
  KernelResolution r = *this;
  r.y_nodes += y_nodes / 2;
  r.y_dyadic += 2;
  r.y_step *= 0.75;
  r.t_nodes += t_nodes / 2;
  r.t_step *= 0.75;
  r.angle_nodes += angle_nodes / 2;
  return r;
}

std::string KernelResolution::describe() const {
  std::ostringstream out;
  out << "y_nodes:" << y_nodes << ";y_dyadic:" << y_dyadic << ";y_step:" << y_step
      << ";t_nodes:" << t_nodes << ";t_step:" << t_step << ";angle_nodes:" << angle_nodes;
  return out.str();
}

namespace {

template <class AngularFn>
KernelValue integrate_kernel(const BumpProfile& profile, const ExtensionKernel& k, double rho,
                             const KernelResolution& res, AngularFn&& angular) {
  const double a = k.a();
  const double kappa = profile.kappa();

  // y rule on [0, 3/4]
  std::vector<double> ys;
  std::vector<double> wy;
  const double dyadic_top = 3.0 / 32.0;
  const double first = dyadic_top * std::ldexp(1.0, -res.y_dyadic);
  {
    const QuadratureRule gj = gauss_jacobi_half(res.y_nodes, a, first);
    ys = gj.nodes;
    wy = gj.weights;
    for (double lo = first; lo < dyadic_top * (1 - 1e-12); lo *= 2.0) {
      std::vector<double> nodes;
      std::vector<double> weights;
      append_panel(nodes, weights, lo, 2.0 * lo, res.y_nodes);
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        ys.push_back(nodes[j]);
        wy.push_back(weights[j] * std::pow(nodes[j], a));
      }
    }
    const int panels = std::max(1, static_cast<int>(std::ceil((kOuter - dyadic_top) / res.y_step)));
    for (int p = 0; p < panels; ++p) {
      std::vector<double> nodes;
      std::vector<double> weights;
      const double lo = dyadic_top + (kOuter - dyadic_top) * p / panels;
      const double hi = dyadic_top + (kOuter - dyadic_top) * (p + 1) / panels;
      append_panel(nodes, weights, lo, hi, res.y_nodes);
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        ys.push_back(nodes[j]);
        wy.push_back(weights[j] * std::pow(nodes[j], a));
      }
    }
  }

  double phi = 0.0;
  double phi_prime = 0.0;
  std::vector<double> br;
  std::vector<double> ts;
  std::vector<double> wt;
  for (std::size_t iy = 0; iy < ys.size(); ++iy) {
    const double y = ys[iy];
    const double t1 = std::sqrt(std::max(0.0, kInner * kInner - y * y));
    const double t2 = std::sqrt(std::max(0.0, kOuter * kOuter - y * y));
    if (t2 <= t1) continue;
    br.clear();
    const int panels = std::max(1, static_cast<int>(std::ceil((t2 - t1) / res.t_step)));
    for (int p = 0; p <= panels; ++p) br.push_back(t1 + (t2 - t1) * p / panels);
    if (rho > t1 - 8.0 * y && rho < t2 + 8.0 * y) {
      for (double w = y; w < t2 - t1; w *= 2.0) {
        br.push_back(rho - w);
        br.push_back(rho + w);
      }
      br.push_back(rho);
    }
    std::sort(br.begin(), br.end());
    ts.clear();
    wt.clear();
    double prev = t1;
    for (double b : br) {
      const double c = std::clamp(b, t1, t2);
      if (c - prev > 1e-14) {
        append_panel(ts, wt, prev, c, res.t_nodes);
        prev = c;
      }
    }
    const double pref = k.C() * std::pow(y, 1.0 - a);
    double j0 = 0.0;
    double j1 = 0.0;
    for (std::size_t it = 0; it < ts.size(); ++it) {
      const double t = ts[it];
      const double R = std::sqrt(t * t + y * y);
      const double e = eta_raw(R);
      const double ep = eta_raw_prime(R);
      if (e == 0.0 && ep == 0.0) continue;
      const Angular ang = angular(pref, t, y);
      const double jac = (k.n() == 1) ? 1.0 : t;
      j0 += wt[it] * jac * e * ang.a0;
      j1 += wt[it] * jac * ep * (t / R) * ang.a1;
    }
    phi += wy[iy] * j0;
    phi_prime += wy[iy] * j1;
  }
  // the y-integral runs over both half-lines
  return {2.0 * kappa * phi, rho == 0.0 ? 0.0 : 2.0 * kappa * phi_prime};
}

}  // namespace

KernelValue kernel_radial(const BumpProfile& profile, const ExtensionKernel& k, double rho,
                          const KernelResolution& res) {
  if (rho < 0.0) throw std::invalid_argument("kernel_radial: rho must be nonnegative");
  if (profile.n() != k.n() || profile.a() != k.a())
    throw std::invalid_argument("kernel_radial: profile and Poisson kernel disagree on (n, a)");
  if (k.n() == 1)
    return integrate_kernel(profile, k, rho, res, [&](double pref, double t, double y) {
      return angular_1d(k, pref, rho, t, y);
    });
  const QuadratureRule unit = gauss_legendre(res.angle_nodes, 0.0, 1.0);
  return integrate_kernel(profile, k, rho, res, [&](double pref, double t, double y) {
    return angular_2d(k, pref, rho, t, y, unit.nodes, unit.weights);
  });
}

Estimate phi_pointwise(const BumpProfile& profile, const ExtensionKernel& k, const Point& x,
                       double tol) {
  if (x.n != k.n()) throw std::invalid_argument("phi_pointwise: dimension mismatch");
  if (profile.n() != k.n() || profile.a() != k.a())
    throw std::invalid_argument("phi_pointwise: profile and kernel disagree on (n, a)");
  const KernelResolution res;
  const double value = kernel_radial(profile, k, x.norm(), res).phi;
  const double check = kernel_radial(profile, k, x.norm(), res.refined()).phi;
  const double error = std::abs(check - value);
  const double scale = kernel_radial(profile, k, 0.0, res).phi;
  if (error > tol * scale) throw ToleranceNotMet("phi_pointwise: quadrature residual", error, tol);
  return {check, error};
}

double phi_fixed_axis(const BumpProfile& profile, const ExtensionKernel& k, const Point& x,
                      double tol) {
  if (x.n != k.n()) throw std::invalid_argument("phi_fixed_axis: dimension mismatch");
  const double rho = x.norm();
  const double beta = k.beta();
  if (k.n() == 1) {
    // z = +-t taken literally, without folding x onto the positive axis
    return integrate_kernel(profile, k, rho, KernelResolution{}, [&](double pref, double t,
                                                                     double y) {
             const double left = pref * std::pow((x[0] - t) * (x[0] - t) + y * y, -0.5 * beta);
             const double right = pref * std::pow((x[0] + t) * (x[0] + t) + y * y, -0.5 * beta);
             return Angular{left + right, 0.0};
           }).phi;
  }
  const double two_pi = 2.0 * std::numbers::pi;
  const double arg = rho > 0.0 ? std::atan2(x[1], x[0]) : 0.0;
  return integrate_kernel(profile, k, rho, KernelResolution{}, [&](double pref, double t,
                                                                   double y) {
           auto g = [&](double theta) {
             const double d1 = x[0] - t * std::cos(theta);
             const double d2 = x[1] - t * std::sin(theta);
             return std::pow(d1 * d1 + d2 * d2 + y * y, -0.5 * beta);
           };
           // one period centred on the direction of x, refined geometrically toward it
           std::vector<double> br{arg - std::numbers::pi, arg, arg + std::numbers::pi};
           if (rho > 0.0 && t > 0.0)
             for (double w = y / std::max(rho, t); w < std::numbers::pi; w *= 2.0)
               for (double c : {arg - w, arg + w}) br.push_back(c);
           std::sort(br.begin(), br.end());
           br.erase(std::unique(br.begin(), br.end()), br.end());
           const double scale = two_pi * std::pow(y * y + (rho - t) * (rho - t), -0.5 * beta);
           const AdaptiveResult r = integrate_adaptive(g, br, tol * 1e-3 * scale, tol * 1e-3);
           return Angular{pref * r.value, 0.0};
         }).phi;
}

}  // namespace fracmv
