#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracmv {

/// A point of R^n for n in {1, 2}. Coordinates past `n` are kept at zero so
/// that norms and inner products never need to consult the dimension.
struct Point {
  int n = 1;
  std::array<double, 2> c{0.0, 0.0};

  Point() = default;
  explicit Point(double x1) : n(1), c{x1, 0.0} {}
  Point(double x1, double x2) : n(2), c{x1, x2} {}

  static Point zero(int dim) {
    Point p;
    p.n = dim;
    return p;
  }
  /// rho * e_1 in R^dim.
  static Point on_axis(int dim, double rho) {
    Point p = zero(dim);
    p.c[0] = rho;
    return p;
  }

  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

  double norm() const { return std::hypot(c[0], c[1]); }
  double norm2() const { return c[0] * c[0] + c[1] * c[1]; }

  Point operator+(const Point& o) const {
    Point r = *this;
    r.c[0] += o.c[0];
    r.c[1] += o.c[1];
    return r;
  }
  Point operator-(const Point& o) const {
    Point r = *this;
    r.c[0] -= o.c[0];
    r.c[1] -= o.c[1];
    return r;
  }
  Point operator*(double k) const {
    Point r = *this;
    r.c[0] *= k;
    r.c[1] *= k;
    return r;
  }
  double dot(const Point& o) const { return c[0] * o.c[0] + c[1] * o.c[1]; }
};

inline double distance(const Point& p, const Point& q) { return (p - q).norm(); }

/// A point (x, y) of the extended space R^{n+1}.
struct ExtPoint {
  Point x;
  double y = 0.0;

  double norm() const { return std::sqrt(x.norm2() + y * y); }
};

/// Dimension n, extension exponent a and fractional order s, tied by 2s + a = 1.
class Params {
 public:
  static Params from_s(int n, double s);
  static Params from_a(int n, double a);

  int n() const { return n_; }
  double a() const { return a_; }
  double s() const { return s_; }

  bool operator==(const Params&) const = default;

 private:
  Params(int n, double a, double s) : n_(n), a_(a), s_(s) {}
  int n_;
  double a_;
  double s_;
};

/// Surface measure of the unit sphere S^{n-1} in R^n (2 for n = 1, 2*pi for n = 2).
double sphere_area(int n);

/// A computed quantity did not reach its requested accuracy.
class ToleranceNotMet : public std::runtime_error {
 public:
  ToleranceNotMet(const std::string& what, double estimate, double tolerance)
      : std::runtime_error(what + " (estimate " + std::to_string(estimate) +
                           " > tolerance " + std::to_string(tolerance) + ")"),
        estimate_(estimate),
        tolerance_(tolerance) {}
  double estimate() const { return estimate_; }
  double tolerance() const { return tolerance_; }

 private:
  double estimate_;
  double tolerance_;
};

class NormalizationFailure : public std::runtime_error {
 public:
  NormalizationFailure(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// A field or integrand returned a non-finite value at a quadrature node.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field was passed to an operation whose growth-class precondition it fails.
class RejectedField : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace fracmv
