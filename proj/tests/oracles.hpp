#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace fracmv::test {

/// Adaptive Simpson with an absolute tolerance, independent of every rule in
/// the library.
class Simpson {
 public:
  explicit Simpson(double abs_tol = 1e-13, int max_depth = 40) : tol_(abs_tol), depth_(max_depth) {}

  double operator()(const std::function<double(double)>& f, double lo, double hi) const {
    if (hi == lo) return 0.0;
    const double fa = f(lo);
    const double fb = f(hi);
    const double m = 0.5 * (lo + hi);
    const double fm = f(m);
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    return refine(f, lo, hi, fa, fm, fb, whole, tol_, depth_);
  }

 private:
  static double refine(const std::function<double(double)>& f, double a, double b, double fa,
                       double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    // below round-off the halved tolerance is unreachable
    const double floor = 1e-15 * (std::abs(left) + std::abs(right));
    if (depth <= 0 || std::abs(diff) <= 15.0 * std::max(tol, floor)) return left + right + diff / 15.0;
    return refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }

  double tol_;
  int depth_;
};

/// Adaptive Simpson on [lo, hi] split at the given interior breakpoints.
inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      double abs_tol = 1e-13, std::initializer_list<double> cuts = {}) {
  const Simpson rule(abs_tol);
  double sum = 0.0;
  double a = lo;
  for (double c : cuts) {
    if (c <= a || c >= hi) continue;
    sum += rule(f, a, c);
    a = c;
  }
  return sum + rule(f, a, hi);
}

/// 2u sin(u^2)^{-a}, the Jacobian-weighted integrand after x = tan(pi/2 - u^2),
/// written so that u = 0 evaluates to its limit.
inline double tan_substitution(double u, double a) {
  if (u == 0.0) return a == 0.5 ? 2.0 : 0.0;
  const double v = u * u;
  return 2.0 * std::pow(u, 1.0 - 2.0 * a) * std::pow(v / std::sin(v), a);
}

}  // namespace fracmv::test
