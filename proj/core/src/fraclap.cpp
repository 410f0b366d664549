#include "fracmv/fraclap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "fracmv/numerics.hpp"
#include "fracmv/polar.hpp"

namespace fracmv {

namespace {

void check_s(double s, const char* who) {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument(std::string(who) + ": s must lie in (0,1)");
}

}  // namespace

GrowthCheck growth_class_check(const ScalarField& f, double s, int n) {
  check_s(s, "growth_class_check");
  if (f.n != n) throw std::invalid_argument("growth_class_check: dimension mismatch");
  constexpr double kRadius = 1e4;
  GrowthCheck out;
  const Point origin = Point::zero(n);
  RadialLayout layout;
  layout.scale = std::max(f.feature_scale, 1e-3);
  layout.core_extent = 2.0;
  layout.core_panels = 16;
  layout.nodes = 8;
  const double reach = std::min(kRadius, support_reach(f, origin));
  const RadialRule radial = plan_radial(layout, reach, &f, origin);
  double integral = 0.0;
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double rho = radial.rho[i];
    const AngularRule ang = angular_rule(origin, rho, &f, 64);
    double shell = 0.0;
    for (std::size_t j = 0; j < ang.size(); ++j)
      shell += ang.weight[j] * std::abs(f(origin + ang.direction[j] * rho));
    integral += radial.weight[i] * std::pow(rho, n - 1) * std::pow(1.0 + rho, -n - 2.0 * s) * shell;
  }
  out.integral = integral;

  const double d = std::max(f.growth.degree, 0.0);
  if (support_reach(f, origin) <= kRadius)
    out.tail_bound = 0.0;
  else if (d < 2.0 * s)
    out.tail_bound = sphere_area(n) * f.growth.bound * std::pow(2.0, d) *
                     std::pow(kRadius, d - 2.0 * s) / (2.0 * s - d);
  else
    out.tail_bound = std::numeric_limits<double>::infinity();

  out.envelope_consistent = true;
  for (double radius : {10.0, 100.0, 1000.0}) {
    const double envelope = 10.0 * f.growth.bound * std::pow(1.0 + radius, f.growth.degree);
    const int directions = n == 1 ? 2 : 8;
    for (int k = 0; k < directions; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / directions;
      const Point p = n == 1 ? Point(k == 0 ? radius : -radius)
                             : Point(radius * std::cos(theta), radius * std::sin(theta));
      const double v = f(p);
      if (!std::isfinite(v) || std::abs(v) > envelope) out.envelope_consistent = false;
    }
  }
  out.admissible = std::isfinite(out.integral) && std::isfinite(out.tail_bound) &&
                   out.envelope_consistent;
  return out;
}

Estimate frac_lap(const ScalarField& f, const Point& x, double s, double tol) {
  check_s(s, "frac_lap");
  const int n = f.n;
  if (x.n != n) throw std::invalid_argument("frac_lap: dimension mismatch");
  const double fx = f(x);
  const double area = sphere_area(n);
  const double two_s = 2.0 * s;

  double cutoff = support_reach(f, x);
  double tail_error = 0.0;
  // beyond the cutoff the second difference is -2 f(x) plus the bounded far field,
  // or wholly bounded when the field declares a second-difference envelope
  bool exact_far = true;
  if (!std::isfinite(cutoff)) {
    const double base = std::max(2.0 + 2.0 * x.norm(), f.structure_radius + x.norm());
    const Growth g = f.second_difference.value_or(f.growth);
    exact_far = !f.second_difference;
    const double d = std::max(g.degree, 0.0);
    if (!(d < two_s))
      throw RejectedField("frac_lap: field '" + f.description + "' grows too fast for order s");
    // |f(x+z)| + |f(x-z)| <= 2 B (2|z|)^d once |z| >= 1 + |x|; a declared envelope is used as is
    const double K = area * g.bound * (exact_far ? 2.0 * std::pow(2.0, d) : 1.0) / (two_s - d);
    cutoff = K > 0.0 ? std::max(base, std::pow(K / tol, 1.0 / (two_s - d))) : base;
    if (cutoff > 1e30) throw ToleranceNotMet("frac_lap: far-field bound", K * std::pow(1e30, d - two_s), tol);
    tail_error = K * std::pow(cutoff, d - two_s);
  }

  RadialLayout layout;
  layout.scale = std::min(1.0, f.feature_scale);
  layout.core_extent = 2.0;
  layout.core_panels = 16;
  layout.nodes = 12;
  layout.jacobi_first = true;
  layout.jacobi_exponent = 1.0 - two_s;
  const RadialRule radial = plan_radial(layout, cutoff, &f, x);
  double sum = 0.0;
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double rho = radial.rho[i];
    const AngularRule ang = angular_rule(x, rho, &f, 64, true);
    double second = 0.0;
    for (std::size_t j = 0; j < ang.size(); ++j) {
      const Point z = ang.direction[j] * rho;
      second += ang.weight[j] * (f(x + z) + f(x - z) - 2.0 * fx);
    }
    sum += radial.weight[i] * std::pow(rho, -1.0 - two_s) * second;
  }
  if (!std::isfinite(sum)) throw EvaluationError("frac_lap: non-finite field sample");
  const double far = exact_far ? fx * area * std::pow(cutoff, -two_s) / two_s : 0.0;
  return {-0.5 * sum + far, tail_error};
}

double ball_poisson_constant(int n, double s) {
  check_s(s, "ball_poisson_constant");
  // at x = 0 the mass is |S|/2 int_0^1 w^{-s} (1-w)^{s-1} dw after |ybar|^2 = r^2/(1-w)
  const QuadratureRule left = gauss_jacobi_half(40, -s, 0.5);
  const QuadratureRule right = gauss_jacobi_half(40, s - 1.0, 0.5);
  double integral = 0.0;
  for (std::size_t k = 0; k < left.size(); ++k)
    integral += left.weights[k] * std::pow(1.0 - left.nodes[k], s - 1.0);
  for (std::size_t k = 0; k < right.size(); ++k)
    integral += right.weights[k] * std::pow(1.0 - right.nodes[k], -s);
  return 2.0 / (sphere_area(n) * integral);
}

double ball_poisson_kernel(const Point& x, const Point& ybar, double r, double s) {
  check_s(s, "ball_poisson_kernel");
  if (x.n != ybar.n) throw std::invalid_argument("ball_poisson_kernel: dimension mismatch");
  const double x2 = x.norm2();
  const double y2 = ybar.norm2();
  if (!(r > 0.0) || !(x2 < r * r) || !(y2 > r * r))
    throw std::invalid_argument("ball_poisson_kernel: requires |x| < r < |ybar|");
  thread_local int cached_n = 0;
  thread_local double cached_s = -1.0;
  thread_local double cached_c = 0.0;
  if (cached_n != x.n || cached_s != s) {
    cached_c = ball_poisson_constant(x.n, s);
    cached_n = x.n;
    cached_s = s;
  }
  return cached_c * std::pow((r * r - x2) / (y2 - r * r), s) *
         std::pow(distance(x, ybar), -x.n);
}

namespace {

struct PoissonNodes {
  std::vector<Point> at;
  std::vector<double> weight;  // includes c, g and (|ybar|^2 - r^2)^{-s}
};

double bump_value(const ExteriorBump& b, const Point& y) {
  const double q = 1.0 - (y - b.center).norm2() / (b.width * b.width);
  if (q <= 0.0) return 0.0;
  return b.amplitude * q * q * q * q;
}

PoissonNodes poisson_nodes(const ExteriorData& data, double r, double s, int n) {
  const double c = ball_poisson_constant(n, s);
  PoissonNodes out;
  auto push = [&](const Point& y, double w, double g) {
    out.at.push_back(y);
    out.weight.push_back(c * w * g * std::pow(y.norm2() - r * r, -s));
  };
  if (!data.bumps.empty()) {
    for (const ExteriorBump& b : data.bumps) {
      if (!(b.center.norm() - b.width > r) || !(b.width > 0.0))
        throw std::invalid_argument("sample_sharmonic: exterior bump meets the ball");
      if (n == 1) {
        const QuadratureRule rule = gauss_legendre(24, b.center[0] - b.width, b.center[0] + b.width);
        for (std::size_t k = 0; k < rule.size(); ++k) {
          const Point y(rule.nodes[k]);
          push(y, rule.weights[k], bump_value(b, y));
        }
      } else {
        const QuadratureRule radial = gauss_legendre(12, 0.0, b.width);
        constexpr int kAngles = 32;
        for (std::size_t k = 0; k < radial.size(); ++k) {
          for (int j = 0; j < kAngles; ++j) {
            const double theta = 2.0 * std::numbers::pi * (j + 0.5) / kAngles;
            const Point y = b.center + Point(std::cos(theta), std::sin(theta)) * radial.nodes[k];
            push(y, radial.weights[k] * radial.nodes[k] * 2.0 * std::numbers::pi / kAngles,
                 bump_value(b, y));
          }
        }
      }
    }
    return out;
  }
  if (!data.g) throw std::invalid_argument("sample_sharmonic: exterior data has no evaluator");
  if (!(data.outer > r)) throw std::invalid_argument("sample_sharmonic: outer radius must exceed r");
  // (rho - r)^{-s} by Gauss-Jacobi over the whole shell
  const QuadratureRule rule = gauss_jacobi_half(48, -s, data.outer - r);
  const int angles = n == 1 ? 2 : 128;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double rho = r + rule.nodes[k];
    // weight carries (rho - r)^{-s}; push() multiplies by (rho^2 - r^2)^{-s}
    const double w = rule.weights[k] * std::pow(rule.nodes[k], s) * std::pow(rho, n - 1);
    for (int j = 0; j < angles; ++j) {
      Point y;
      double wa = 1.0;
      if (n == 1) {
        y = Point(j == 0 ? rho : -rho);
      } else {
        const double theta = 2.0 * std::numbers::pi * (j + 0.5) / angles;
        y = Point(rho * std::cos(theta), rho * std::sin(theta));
        wa = 2.0 * std::numbers::pi / angles;
      }
      const double g = data.g(y);
      if (!std::isfinite(g)) throw RejectedField("sample_sharmonic: exterior data is not bounded");
      push(y, w * wa, g);
    }
  }
  return out;
}

}  // namespace

ScalarField sample_sharmonic(const ExteriorData& data, double r, double s, int n) {
  check_s(s, "sample_sharmonic");
  if (n != 1 && n != 2) throw std::invalid_argument("sample_sharmonic: n must be 1 or 2");
  if (!(r > 0.0)) throw std::invalid_argument("sample_sharmonic: r must be positive");
  auto nodes = std::make_shared<const PoissonNodes>(poisson_nodes(data, r, s, n));

  ScalarField::Evaluator outside = data.g;
  double outer = data.outer;
  double amp = 0.0;
  double min_width = r;
  std::vector<SingularSphere> singular = data.singular;
  if (!data.bumps.empty()) {
    auto bumps = std::make_shared<const std::vector<ExteriorBump>>(data.bumps);
    outside = [bumps](const Point& y) {
      double v = 0.0;
      for (const ExteriorBump& b : *bumps) v += bump_value(b, y);
      return v;
    };
    outer = 0.0;
    for (const ExteriorBump& b : data.bumps) {
      outer = std::max(outer, b.center.norm() + b.width);
      amp = std::max(amp, std::abs(b.amplitude));
      min_width = std::min(min_width, b.width);
      singular.push_back({b.center, b.width, false});
    }
  } else {
    for (std::size_t k = 0; k < nodes->at.size(); k += 1) amp = std::max(amp, std::abs(data.g(nodes->at[k])));
  }
  singular.push_back({Point::zero(n), r});

  ScalarField f;
  f.n = n;
  const double r2 = r * r;
  f.eval = [nodes, outside, r2, s, n](const Point& x) {
    const double x2 = x.norm2();
    if (x2 >= r2) return outside(x);
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes->at.size(); ++k) {
      const double d = distance(x, nodes->at[k]);
      sum += nodes->weight[k] * (n == 1 ? 1.0 / d : 1.0 / (d * d));
    }
    return std::pow(r2 - x2, s) * sum;
  };
  f.growth = {0.0, std::max(amp, 1e-300)};
  f.support = SingularSphere{Point::zero(n), outer};
  f.singular = std::move(singular);
  f.structure_radius = outer;
  f.feature_scale = std::min(0.08 * r, 0.4 * min_width);
  f.harmonic_ball = SingularSphere{Point::zero(n), r};
  f.scale = std::max(std::abs(f.eval(Point::zero(n))), amp);
  f.description = "sample_sharmonic";
  return f;
}

ScalarField constant_field(int n, double value) {
  if (n != 1 && n != 2) throw std::invalid_argument("constant_field: n must be 1 or 2");
  ScalarField f;
  f.n = n;
  f.eval = [value](const Point&) { return value; };
  f.growth = {0.0, std::max(std::abs(value), 1e-300)};
  f.second_difference = Growth{0.0, 0.0};
  f.structure_radius = 0.0;
  f.feature_scale = 1.0;
  f.scale = std::abs(value);
  f.description = "constant";
  f.closed_form_extension = [value](const Point&, double) { return value; };
  return f;
}

ScalarField affine_field(const Point& gradient, double offset) {
  ScalarField f;
  f.n = gradient.n;
  f.eval = [gradient, offset](const Point& x) { return offset + gradient.dot(x); };
  f.growth = {1.0, std::abs(offset) + gradient.norm()};
  f.second_difference = Growth{0.0, 0.0};
  f.feature_scale = 1.0;
  f.scale = std::abs(offset) + gradient.norm();
  f.description = "affine";
  f.closed_form_extension = [gradient, offset](const Point& x, double) {
    return offset + gradient.dot(x);
  };
  return f;
}

ScalarField gaussian_field(const Point& center, double width, double amplitude) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_field: width must be positive");
  ScalarField f;
  f.n = center.n;
  f.eval = [center, width, amplitude](const Point& x) {
    return amplitude * std::exp(-(x - center).norm2() / (width * width));
  };
  f.growth = {0.0, std::abs(amplitude)};
  // exp(-81) is far below every tolerance used with this field
  f.support = SingularSphere{center, 9.0 * width};
  f.structure_radius = center.norm() + 9.0 * width;
  f.feature_scale = 0.25 * width;
  f.scale = std::abs(amplitude);
  f.description = "gaussian";
  return f;
}

ScalarField xplus_field(double s) {
  check_s(s, "xplus_field");
  ScalarField f;
  f.n = 1;
  f.eval = [s](const Point& x) { return x[0] > 0.0 ? std::pow(x[0], s) : 0.0; };
  f.growth = {s, 1.0};
  f.singular = {{Point(0.0), 0.0}};
  f.structure_radius = 1.0;
  f.feature_scale = 0.25;
  f.scale = 1.0;
  f.description = "xplus_s";
  return f;
}

ScalarField xplus_cut_field(double s) {
  check_s(s, "xplus_cut_field");
  auto h = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  ScalarField f;
  f.n = 1;
  f.eval = [s, h](const Point& x) {
    const double t = std::abs(x[0]);
    if (x[0] <= 0.0 || t >= 2.0) return 0.0;
    const double cut = t <= 1.0 ? 1.0 : h(2.0 - t) / (h(2.0 - t) + h(t - 1.0));
    return std::pow(x[0], s) * cut;
  };
  f.growth = {0.0, 2.0};
  f.singular = {{Point(0.0), 0.0}};
  f.support = SingularSphere{Point(0.0), 2.0};
  f.structure_radius = 2.0;
  f.feature_scale = 0.125;
  f.scale = 1.0;
  f.description = "xplus_s_cut";
  return f;
}

ScalarField ball_poisson_field(int n, double s, std::uint64_t seed, double r) {
  check_s(s, "ball_poisson_field");
  if (n != 1 && n != 2) throw std::invalid_argument("ball_poisson_field: n must be 1 or 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ExteriorData data;
  for (int j = 0; j < 3; ++j) {
    const double radius = r * (1.5 + 1.8 * unit(rng));
    Point center;
    if (n == 1) {
      center = Point(unit(rng) < 0.5 ? -radius : radius);
    } else {
      const double theta = 2.0 * std::numbers::pi * unit(rng);
      center = Point(radius * std::cos(theta), radius * std::sin(theta));
    }
    const double magnitude = 0.5 + unit(rng);
    const double amplitude = unit(rng) < 0.5 ? -magnitude : magnitude;
    data.bumps.push_back({center, 0.2 * r, amplitude});
  }
  // rescale so that the bumps' kernel-weighted contributions at x = 0 sum to one in modulus
  double total = 0.0;
  for (const ExteriorBump& b : data.bumps) {
    ExteriorData single;
    single.bumps = {{b.center, b.width, 1.0}};
    total += std::abs(b.amplitude) * sample_sharmonic(single, r, s, n)(Point::zero(n));
  }
  for (ExteriorBump& b : data.bumps) b.amplitude /= total;
  ScalarField f = sample_sharmonic(data, r, s, n);
  std::ostringstream name;
  name << "ball_poisson(seed=" << seed << ")";
  f.description = name.str();
  return f;
}

ScalarField riesz_field(int n, double s, const Point& pole) {
  check_s(s, "riesz_field");
  if (pole.n != n) throw std::invalid_argument("riesz_field: dimension mismatch");
  const double k = 2.0 * s - n;
  const bool logarithmic = std::abs(k) < 1e-14;
  ScalarField f;
  f.n = n;
  if (logarithmic) {
    f.eval = [pole](const Point& x) { return std::log(distance(x, pole)); };
    f.closed_form_extension = [pole](const Point& x, double y) {
      return 0.5 * std::log((x - pole).norm2() + y * y);
    };
    f.growth = {0.1, 10.0 + std::log(1.0 + pole.norm())};
  } else {
    f.eval = [pole, k](const Point& x) { return std::pow(distance(x, pole), k); };
    f.closed_form_extension = [pole, k](const Point& x, double y) {
      return std::pow((x - pole).norm2() + y * y, 0.5 * k);
    };
    // far-field envelope: |x - pole| <= (1 + |pole|)(1 + |x|), and >= (1 + |x|)/2 far out
    f.growth = k > 0.0 ? Growth{k, std::pow(1.0 + pole.norm(), k)} : Growth{k, std::pow(2.0, -k)};
  }
  f.singular = {{pole, 0.0}};
  f.structure_radius = pole.norm() + 1.0;
  f.feature_scale = 0.25;
  f.scale = 1.0;
  f.description = "riesz";
  return f;
}

const std::vector<std::string>& field_keys() {
  static const std::vector<std::string> keys = {"constant", "affine",       "gaussian",
                                                "xplus_s",  "ball_poisson", "riesz"};
  return keys;
}

ScalarField make_field(const std::string& key, const Params& params, std::uint64_t seed) {
  const int n = params.n();
  if (key == "constant") return constant_field(n, 1.0);
  if (key == "affine") return n == 1 ? affine_field(Point(1.0)) : affine_field(Point(1.0, -0.5));
  if (key == "gaussian")
    return n == 1 ? gaussian_field(Point(0.1), 0.5) : gaussian_field(Point(0.1, -0.05), 0.5);
  if (key == "xplus_s") {
    if (n != 1) throw std::invalid_argument("field 'xplus_s' is defined for n = 1 only");
    return xplus_field(params.s());
  }
  if (key == "ball_poisson") return ball_poisson_field(n, params.s(), seed);
  if (key == "riesz") return riesz_field(n, params.s(), Point::on_axis(n, 1.6));
  throw std::invalid_argument("unknown field '" + key + "'");
}

}  // namespace fracmv
