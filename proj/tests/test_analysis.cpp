#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracmv/analysis.hpp"
#include "fracmv/fraclap.hpp"
#include "table_cache.hpp"

using namespace fracmv;
using doctest::Approx;

namespace {

ScalarField distance_field(const Point& x0) {
  ScalarField f;
  f.n = x0.n;
  f.eval = [x0](const Point& y) { return distance(y, x0); };
  f.growth = Growth{1.0, 1.0};
  f.description = "distance";
  return f;
}

}  // namespace

TEST_CASE("distance_to_boundary examples") {
  CHECK(distance_to_boundary(Domain::interval(0.0, 1.0), Point(0.3)) == Approx(0.3));
  CHECK(distance_to_boundary(Domain::ball(Point(0.0, 0.0), 1.0), Point(0.6, 0.0)) == Approx(0.4));
  CHECK(distance_to_boundary(Domain::box(Point(0.0, 0.0), Point(1.0, 1.0)), Point(0.5, 0.9)) ==
        Approx(0.1));
  const Domain tri = Domain::polygon({Point(0.0, 0.0), Point(2.0, 0.0), Point(0.0, 2.0)});
  CHECK(distance_to_boundary(tri, Point(0.5, 0.5)) == Approx(0.5));
  CHECK(distance_to_boundary(tri, Point(0.9, 0.9)) == Approx(0.2 / std::sqrt(2.0)));
}

TEST_CASE("distance vanishes on the boundary and outside") {
  const Domain disk = Domain::ball(Point(0.0, 0.0), 1.0);
  CHECK(distance_to_boundary(disk, Point(1.0, 0.0)) == 0.0);
  CHECK(distance_to_boundary(disk, Point(2.0, 0.0)) == 0.0);
  CHECK_FALSE(disk.contains(Point(2.0, 0.0)));
  const Domain tri = Domain::polygon({Point(0.0, 0.0), Point(2.0, 0.0), Point(0.0, 2.0)});
  CHECK(distance_to_boundary(tri, Point(1.5, 1.5)) == 0.0);
  CHECK(distance_to_boundary(tri, Point(1.0, 0.0)) == 0.0);
  CHECK(tri.contains(Point(0.2, 0.2)));
  CHECK(distance_to_boundary(Domain::interval(-1.0, 1.0), Point(1.0)) == 0.0);
}

TEST_CASE("extension height is the diameter") {
  CHECK(Domain::ball(Point(0.0, 0.0), 1.5).extension_height() == Approx(3.0));
  CHECK(Domain::interval(-1.0, 1.0).extension_height() == Approx(2.0));
  CHECK(Domain::box(Point(0.0, 0.0), Point(3.0, 4.0)).extension_height() == Approx(5.0));
  const Domain tri = Domain::polygon({Point(0.0, 0.0), Point(2.0, 0.0), Point(0.0, 2.0)});
  CHECK(tri.extension_height() == Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("interior points stay away from the boundary") {
  for (const Domain& d : {Domain::interval(0.0, 1.0), Domain::ball(Point(0.0, 0.0), 1.0),
                          Domain::polygon({Point(0.0, 0.0), Point(2.0, 0.0), Point(0.0, 2.0)})}) {
    const auto pts = d.interior_points(5, 9);
    CHECK(pts.size() == 5);
    for (const Point& x : pts) CHECK(d.distance_to_boundary(x) >= 0.1 * d.diameter() - 1e-12);
    const auto again = d.interior_points(5, 9);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(pts[i].c == again[i].c);
  }
}

TEST_CASE("domain quadrature integrates the area") {
  std::vector<Point> nodes;
  std::vector<double> w;
  Domain::ball(Point(0.0, 0.0), 1.0).quadrature(8, nodes, w);
  double area = 0.0;
  for (double v : w) area += v;
  CHECK(area == Approx(std::numbers::pi).epsilon(1e-12));
  Domain::interval(-1.0, 2.0).quadrature(4, nodes, w);
  double len = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) len += w[k] * nodes[k][0] * nodes[k][0];
  CHECK(len == Approx(3.0).epsilon(1e-13));
}

TEST_CASE("sharp_maximal of a constant vanishes") {
  CHECK(sharp_maximal(constant_field(1, 3.0), Point(0.2), 0.5) == 0.0);
  CHECK(sharp_maximal(constant_field(2, 3.0), Point(0.2, 0.1), 0.3) == 0.0);
}

TEST_CASE("sharp_maximal of |y - x| against the family closed form") {
  const Point x(0.3);
  const ScalarField f = distance_field(x);
  const BallFamily family;
  for (double lambda : {0.3, 0.5, 0.8}) {
    // the ball centred at x + t rho has integral rho^2 (1 + t^2)
    double oracle = 0.0;
    for (double rho : family.radii())
      for (double t : family.offsets)
        oracle = std::max(oracle, (1.0 + t * t) * std::pow(rho, 1.0 - lambda) / std::pow(2.0, 1.0 + lambda));
    CHECK(sharp_maximal(f, x, lambda, family) == Approx(oracle).epsilon(0.02));
  }
  CHECK(family.radii().back() == Approx(8.0));
}

TEST_CASE("sharp_maximal is monotone in lambda on families of small or large balls") {
  // |B|^{-lambda/n} increases with lambda when |B| <= 1 and decreases when |B| >= 1
  const ScalarField f = gaussian_field(Point(0.1, -0.2), 0.4);
  const Point x(0.3, 0.1);
  const std::vector<double> lambdas{0.2, 0.4, 0.6, 0.8};
  BallFamily small;
  small.r_max = 0.5;
  BallFamily large;
  large.r_min = 0.6;
  const std::vector<double> lo = sharp_maximal(f, x, lambdas, small);
  const std::vector<double> hi = sharp_maximal(f, x, lambdas, large);
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i) {
    CHECK(lo[i] <= lo[i + 1]);
    CHECK(hi[i] >= hi[i + 1]);
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    CHECK(lo[i] == Approx(sharp_maximal(f, x, lambdas[i], small)).epsilon(1e-14));
}

TEST_CASE("hl_maximal examples") {
  CHECK(hl_maximal(constant_field(1), Point(0.4)) == Approx(1.0).epsilon(1e-12));
  CHECK(hl_maximal(constant_field(2), Point(0.4, 0.1)) == Approx(1.0).epsilon(1e-12));
  const ScalarField f = gaussian_field(Point(0.1), 0.3, -2.0);
  for (const Point& x : Domain::interval(-1.0, 1.0).interior_points(5, 4))
    CHECK(hl_maximal(f, x) >= std::abs(f(x)) * (1.0 - 1e-6));
}

TEST_CASE("maximal functions grow under family enrichment") {
  BallFamily coarse;
  coarse.ratio = 2.0;
  coarse.offsets = {0.0, 0.5};
  BallFamily fine;
  fine.ratio = std::sqrt(2.0);
  fine.offsets = {0.0, 0.25, 0.5, 0.9};
  coarse.resolution = fine.resolution = 16;
  const ScalarField f = ball_poisson_field(2, 0.5, 3);
  const Point x(0.2, -0.1);
  CHECK(hl_maximal(f, x, fine) >= hl_maximal(f, x, coarse));
  CHECK(sharp_maximal(f, x, 0.5, fine) >= sharp_maximal(f, x, 0.5, coarse));
}

TEST_CASE("gradient_of_solution examples") {
  const RadialKernelTable& t = test::cached_table(1, 0.0);
  const GradientEstimate g0 = gradient_of_solution(t, constant_field(1), Point(0.2), 0.3);
  CHECK(std::abs(g0.value[0]) < 1e-6);

  const RadialKernelTable& t75 = test::cached_table(1, -0.5);
  const GradientEstimate g1 = gradient_of_solution(t75, affine_field(Point(1.0)), Point(0.1), 0.2);
  CHECK(std::abs(g1.value[0] - 1.0) < 1e-3);
}

TEST_CASE("gradient_of_solution is independent of r and matches central differences") {
  for (int n : {1, 2}) {
    const RadialKernelTable& t = test::cached_table(n, 0.0);
    const ScalarField f = ball_poisson_field(n, 0.5, 6);
    const Point x = n == 1 ? Point(0.25) : Point(0.25, -0.15);
    const double delta = 1.0 - x.norm();
    const Point ga = gradient_of_solution(t, f, x, 0.5 * delta).value;
    const Point gb = gradient_of_solution(t, f, x, 0.25 * delta).value;
    const double h = 1e-4 * delta;
    for (int i = 0; i < n; ++i) {
      Point e = Point::zero(n);
      e[i] = h;
      const double fd = (f(x + e) - f(x - e)) / (2.0 * h);
      const double scale = std::max(ga.norm(), 1e-12);
      CHECK(std::abs(ga[i] - gb[i]) <= 1e-3 * scale);
      CHECK(std::abs(ga[i] - fd) <= 1e-3 * scale);
    }
  }
}

TEST_CASE("lemma33_ratio of a constant is zero") {
  const RadialKernelTable& t = test::cached_table(1, 0.0);
  const Domain d = Domain::interval(-1.0, 1.0);
  const Lemma33Report rep =
      lemma33_ratio(t, constant_field(1, 2.0), d, 0.5, d.interior_points(3), {0.5, 0.25});
  CHECK_FALSE(rep.violation);
  for (const Lemma33Sample& s : rep.samples) CHECK(s.ratio == 0.0);
}

TEST_CASE("lemma33_ratio band and lambda recombination") {
  const RadialKernelTable& t = test::cached_table(1, 0.0);
  const Domain d = Domain::ball(Point(0.0), 1.0);
  const ScalarField f = ball_poisson_field(1, 0.5, 2);
  const std::vector<double> factors{0.5, 0.25, 0.125};
  const auto reps = lemma33_ratio(t, f, d, {0.25, 0.5}, d.interior_points(4, 2), factors);
  REQUIRE(reps.size() == 2);
  const Lemma33Report& half = reps[1];
  CHECK(std::isfinite(half.max_ratio(0.125)));
  CHECK(half.max_ratio(0.125) <= 4.0 * half.max_ratio(0.5));
  const Lemma33Report single = lemma33_ratio(t, f, d, 0.5, d.interior_points(4, 2), factors);
  for (std::size_t k = 0; k < single.samples.size(); ++k)
    CHECK(single.samples[k].ratio == Approx(half.samples[k].ratio).epsilon(1e-13));
  for (std::size_t k = 0; k < half.samples.size(); ++k) {
    const Lemma33Sample& a = reps[0].samples[k];
    const Lemma33Sample& b = half.samples[k];
    CHECK(a.gradient_norm == b.gradient_norm);
    const double predicted = a.ratio * std::pow(a.r, 0.25 - 0.5) * a.sharp / b.sharp;
    CHECK(b.ratio == Approx(predicted).epsilon(1e-12));
  }
}

TEST_CASE("besov_seminorm of a constant vanishes") {
  CHECK(besov_seminorm(constant_field(1), 0.5, 2.0).value == 0.0);
}

TEST_CASE("besov_seminorm scaling") {
  const double lambda = 0.5;
  const double p = 2.0;
  const ScalarField f = gaussian_field(Point(0.0), 0.4);
  const ScalarField f2 = gaussian_field(Point(0.0), 0.8);
  BesovWindow w;
  w.W = 3.0;
  w.h_max = 0.5;
  BesovWindow w2 = w;
  w2.W = 6.0;
  w2.h_max = 1.0;
  const double base = besov_seminorm(f, lambda, p, w).value;
  const double scaled = besov_seminorm(f2, lambda, p, w2).value;
  CHECK(scaled == Approx(base * std::pow(2.0, 1.0 / p - lambda)).epsilon(0.02));
}

TEST_CASE("besov_seminorm flags divergence past the smoothness threshold") {
  // x_+^s lies in B_p^lambda exactly when lambda < s + 1/p
  const ScalarField f = xplus_cut_field(0.25);
  BesovWindow w;
  w.W = 3.0;
  const BesovResult ok = besov_seminorm(f, 0.2, 8.0, w);
  CHECK(std::isfinite(ok.value));
  CHECK_FALSE(ok.divergence_warning);
  const BesovResult bad = besov_seminorm(f, 0.6, 8.0, w);
  CHECK(bad.divergence_warning);
}

TEST_CASE("lemma32_ratio of the zero field is zero") {
  const RadialKernelTable& t = test::cached_table(1, 0.0);
  const Lemma32Result r = lemma32_ratio(t, constant_field(1, 0.0), Domain::interval(-1.0, 1.0), 0.5, 2.0, 8);
  CHECK(r.ratio == 0.0);
}

TEST_CASE("regularity parameters") {
  RegularityParams rp{0.5, 2.0, 0.25};
  CHECK(1.0 / rp.tau(2) == Approx(0.5 + 0.125));
  CHECK_NOTHROW(rp.validate());
  rp.lambda = 1.0;
  CHECK_THROWS_AS(rp.validate(), std::invalid_argument);
  rp.lambda = 0.5;
  rp.p = 1.0;
  CHECK_THROWS_AS(rp.validate(), std::invalid_argument);
}

TEST_CASE("report rows") {
  CHECK(csv_header() == "field_id,x,r,lambda,p,value,kind");
  CHECK(format_point(Point(0.25, -1.0)) == "0.25;-1");
  ReportRow row;
  row.field_id = "constant";
  row.x = format_point(Point(0.5));
  row.value = 2.0;
  row.kind = "mvp_residual";
  CHECK(csv_line(row) == "constant,0.5,,,,2,mvp_residual");
}
