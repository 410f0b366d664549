#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "fracmv/analysis.hpp"
#include "fracmv/fraclap.hpp"
#include "oracles.hpp"

using namespace fracmv;
using doctest::Approx;

namespace {

// int over |ybar| > r of c ((r^2-x^2)/(|ybar|^2-r^2))^s |x-ybar|^{-1} in n = 1, with
// ybar = +-(r + e^v) and |ybar|^2 - r^2 = w (2r + w) kept free of cancellation
double line_mass(double x, double r, double s) {
  const double c = ball_poisson_constant(1, s);
  double sum = 0.0;
  for (double sign : {-1.0, 1.0}) {
    sum += test::simpson(
        [&](double v) {
          const double w = std::exp(v);
          const double ybar = sign * (r + w);
          return c * std::pow((r * r - x * x) / (w * (2.0 * r + w)), s) / std::abs(x - ybar) * w;
        },
        -200.0, 200.0, 1e-13, {-10.0, 0.0, 5.0, 20.0});
  }
  return sum;
}

}  // namespace

TEST_CASE("growth_class_check examples") {
  for (double s : {0.25, 0.5, 0.75}) CHECK(growth_class_check(constant_field(1), s, 1).admissible);
  CHECK(growth_class_check(constant_field(2), 0.3, 2).admissible);
  const GrowthCheck ok = growth_class_check(affine_field(Point(1.0)), 0.75, 1);
  CHECK(ok.admissible);
  CHECK(ok.envelope_consistent);
  CHECK_FALSE(growth_class_check(affine_field(Point(1.0)), 0.4, 1).admissible);
}

TEST_CASE("frac_lap examples") {
  CHECK(frac_lap(constant_field(1), Point(0.3), 0.5).value == 0.0);
  CHECK(frac_lap(constant_field(2), Point(0.3, 0.1), 0.25).value == 0.0);
  CHECK(std::abs(frac_lap(affine_field(Point(1.0)), Point(0.5), 0.6).value) < 1e-6);
  CHECK(std::abs(frac_lap(xplus_field(0.5), Point(1.0), 0.5, 1e-6).value) < 1e-4);
}

TEST_CASE("frac_lap of x_+^s is stable under tolerance refinement") {
  const double coarse = frac_lap(xplus_field(0.5), Point(1.0), 0.5, 1e-5).value;
  const double fine = frac_lap(xplus_field(0.5), Point(1.0), 0.5, 1e-7).value;
  CHECK(std::abs(fine) < 1e-4);
  CHECK(std::abs(fine - coarse) < 1e-4);
}

TEST_CASE("frac_lap is positive at a strict interior maximum") {
  CHECK(frac_lap(gaussian_field(Point(0.0), 1.0), Point(0.0), 0.5).value > 0.0);
  CHECK(frac_lap(gaussian_field(Point(0.0, 0.0), 1.0), Point(0.0, 0.0), 0.3).value > 0.0);
}

TEST_CASE("frac_lap rejects fields outside the growth class") {
  ScalarField f;
  f.n = 1;
  f.eval = [](const Point& x) { return std::abs(x[0]); };
  f.growth = Growth{1.0, 1.0};
  f.description = "abs";
  CHECK_THROWS_AS(frac_lap(f, Point(0.5), 0.4), RejectedField);
  // affine second differences vanish, so no growth condition is needed
  CHECK(std::abs(frac_lap(affine_field(Point(1.0)), Point(0.5), 0.4).value) < 1e-12);
}

TEST_CASE("ball_poisson_constant: unit mass at the centre") {
  for (double s : {0.25, 0.5, 0.75}) {
    CHECK(std::abs(line_mass(0.0, 1.0, s) - 1.0) < 1e-6);
    // the classical values Gamma(n/2) sin(pi s) / pi^{n/2+1}
    CHECK(ball_poisson_constant(1, s) == Approx(std::sin(std::numbers::pi * s) / std::numbers::pi).epsilon(1e-9));
    CHECK(ball_poisson_constant(2, s) ==
          Approx(std::sin(std::numbers::pi * s) / (std::numbers::pi * std::numbers::pi)).epsilon(1e-9));
  }
}

TEST_CASE("ball_poisson_kernel: unit mass off centre") {
  for (double s : {0.25, 0.5, 0.75}) {
    CHECK(std::abs(line_mass(0.5, 1.0, s) - 1.0) < 1e-5);
    CHECK(std::abs(line_mass(-1.0, 2.0, s) - 1.0) < 1e-5);
  }
}

TEST_CASE("ball_poisson_kernel: closed form") {
  const double s = 0.3;
  const Point x(0.2, -0.1);
  const Point ybar(1.5, 0.7);
  const double c = ball_poisson_constant(2, s);
  const double expected =
      c * std::pow((1.0 - x.norm2()) / (ybar.norm2() - 1.0), s) / distance(x, ybar) / distance(x, ybar);
  CHECK(ball_poisson_kernel(x, ybar, 1.0, s) == Approx(expected).epsilon(1e-14));
}

TEST_CASE("ball_poisson_kernel: vanishes toward the sphere") {
  const Point ybar(1.7, 0.4);
  double previous = std::numeric_limits<double>::infinity();
  for (double t : {0.8, 0.9, 0.99}) {
    const double k = ball_poisson_kernel(Point(t * 0.6, t * 0.8), ybar, 1.0, 0.4);
    CHECK(k < previous);
    previous = k;
  }
  CHECK_THROWS_AS(ball_poisson_kernel(Point(1.0), Point(2.0), 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ball_poisson_kernel(Point(0.0), Point(0.5), 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("sample_sharmonic: constant exterior data loses mass to the truncated shell") {
  for (int n : {1, 2}) {
    ExteriorData data;
    data.g = [](const Point&) { return 1.0; };
    data.outer = 4.0;
    const ScalarField f = sample_sharmonic(data, 1.0, 0.5, n);
    const double v = f(Point::zero(n));
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    CHECK(f(Point::on_axis(n, 2.0)) == 1.0);
  }
}

TEST_CASE("sample_sharmonic: non-finite exterior data is rejected") {
  ExteriorData data;
  data.g = [](const Point& y) { return y.norm() < 1.5 ? std::numeric_limits<double>::infinity() : 1.0; };
  data.outer = 4.0;
  CHECK_THROWS_AS(sample_sharmonic(data, 1.0, 0.5, 1), RejectedField);
}

TEST_CASE("ball-Poisson samples are s-harmonic under the oracle") {
  for (int n : {1, 2}) {
    for (double s : {0.25, 0.5, 0.75}) {
      const ScalarField f = ball_poisson_field(n, s, 7);
      const Domain ball = Domain::ball(Point::zero(n), 1.0);
      CHECK(std::abs(frac_lap(f, Point::zero(n), s, 1e-6).value) <= 5e-4 * f.scale);
      for (const Point& x : ball.interior_points(2, 3))
        CHECK(std::abs(frac_lap(f, x, s, 1e-6).value) <= 5e-4 * f.scale);
    }
  }
}

TEST_CASE("ball-Poisson samples approach their exterior values") {
  // inside, f - g ~ (r - |x|)^s, so the gap across the sphere shrinks like eps^s
  for (int n : {1, 2}) {
    for (double s : {0.25, 0.75}) {
      const ScalarField f = ball_poisson_field(n, s, 2);
      const Point e = n == 1 ? Point(1.0) : Point(0.6, 0.8);
      const auto gap = [&](double eps) { return std::abs(f(e * (1.0 - eps)) - f(e * (1.0 + eps))); };
      const double g2 = gap(1e-2);
      const double g6 = gap(1e-6);
      CHECK(g6 <= 2.0 * g2 * std::pow(1e-4, s));
      CHECK(gap(1e-8) < gap(1e-4));
    }
  }
}

TEST_CASE("registry fields") {
  const Params p = Params::from_s(1, 0.75);
  for (const std::string& key : field_keys()) {
    const ScalarField f = make_field(key, p, 3);
    CHECK(std::isfinite(f(Point(0.2))));
    CHECK(std::isfinite(f(Point(100.0))));
  }
  CHECK_THROWS_AS(make_field("nope", p), std::invalid_argument);
}

TEST_CASE("declared growth envelopes hold far out") {
  const Params p = Params::from_s(2, 0.75);
  for (const std::string& key : {"constant", "affine", "gaussian", "ball_poisson", "riesz"}) {
    const ScalarField f = make_field(key, p, 1);
    CHECK(growth_class_check(f, p.s(), 2).envelope_consistent);
  }
}
