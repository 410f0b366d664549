#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracmv/numerics.hpp"
#include "fracmv/profile.hpp"
#include "oracles.hpp"

using namespace fracmv;
using doctest::Approx;

namespace {

const BumpProfile& profile(int n, double a) {
  static const BumpProfile p10 = normalize(1, 0.0);
  static const BumpProfile p1m = normalize(1, -0.5);
  static const BumpProfile p1p = normalize(1, 0.5);
  static const BumpProfile p2m = normalize(2, -0.5);
  if (n == 2) return p2m;
  if (a < 0.0) return p1m;
  if (a > 0.0) return p1p;
  return p10;
}

}  // namespace

TEST_CASE("eta support and midpoint value") {
  const BumpProfile& p = profile(1, 0.0);
  CHECK(p.eta(0.2) == 0.0);
  CHECK(p.eta(0.9) == 0.0);
  CHECK(p.eta(0.25) == 0.0);
  CHECK(p.eta(0.75) == 0.0);
  CHECK(p.eta(0.5) == Approx(p.kappa() * std::exp(-16.0)).epsilon(1e-15));
  for (double t = 0.26; t < 0.75; t += 0.01) CHECK(p.eta(t) > 0.0);
  CHECK_THROWS_AS(p.eta(-0.1), std::invalid_argument);
}

TEST_CASE("eta is flat at the support endpoints") {
  // first three finite-difference derivatives vanish as the step shrinks
  for (double end : {0.25, 0.75}) {
    double previous = 1.0;
    for (double h : {0.02, 0.01, 0.005}) {
      const double sgn = end < 0.5 ? 1.0 : -1.0;
      const auto f = [&](int k) { return eta_raw(end + sgn * k * h); };
      const double d1 = std::abs(f(1) - f(0)) / h;
      const double d2 = std::abs(f(2) - 2 * f(1) + f(0)) / (h * h);
      const double d3 = std::abs(f(3) - 3 * f(2) + 3 * f(1) - f(0)) / (h * h * h);
      const double worst = std::max({d1, d2, d3});
      CHECK(worst < previous);
      previous = worst;
    }
    CHECK(previous < 1e-20);
  }
}

TEST_CASE("normalize gives unit weighted mass") {
  for (int n : {1, 2}) {
    for (double a : {-0.5, 0.0, 0.5}) {
      if (n == 2 && a != -0.5) continue;
      const BumpProfile& p = profile(n, a);
      const double mass = integrate_ball_weighted(
          [&](const ExtPoint& X) { return p.phi(X); }, {Point::zero(n), 0.0}, 1.0, a,
          kNormalizationResolution);
      CHECK(std::abs(mass - 1.0) < 1e-8);
      CHECK(p.normalization_residual() < 1e-9);
    }
  }
}

TEST_CASE("kappa for n = 1, a = 0 against the Simpson oracle") {
  // in R^2 with weight 1 the mass is 2 pi int rho eta_raw(rho) drho
  const double radial =
      test::simpson([](double r) { return r * eta_raw(r); }, 0.25, 0.75, 1e-22);
  const double kappa = 1.0 / (2.0 * std::numbers::pi * radial);
  CHECK(profile(1, 0.0).kappa() == Approx(kappa).epsilon(1e-9));
}

TEST_CASE("kappa depends on the weight") {
  CHECK(profile(1, 0.5).kappa() != profile(1, -0.5).kappa());
}

TEST_CASE("normalize rejects bad parameters") {
  CHECK_THROWS_AS(normalize(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(normalize(1, 1.0), std::invalid_argument);
}

TEST_CASE("zeta examples") {
  const BumpProfile& p = profile(1, 0.5);
  CHECK(p.zeta(0.2) == -p.A());
  CHECK(p.zeta(0.0) == -p.A());
  CHECK(p.zeta(1.0) == 0.0);
  CHECK(p.zeta(0.75) == Approx(0.0).scale(p.A()).epsilon(1e-14));
  CHECK(p.zeta(0.5) > -p.A());
  CHECK(p.zeta(0.5) < 0.0);
  double prev = p.zeta(0.0);
  for (double t = 0.26; t <= 0.8; t += 0.02) {
    CHECK(p.zeta(t) >= prev - 1e-15 * p.A());
    prev = p.zeta(t);
  }
}

TEST_CASE("A matches the Simpson oracle") {
  const BumpProfile& p = profile(1, -0.5);
  const double oracle =
      p.kappa() * test::simpson([](double r) { return r * eta_raw(r); }, 0.25, 0.75, 1e-22);
  CHECK(p.A() == Approx(oracle).epsilon(1e-10));
}

TEST_CASE("grad_psi examples") {
  const BumpProfile& p = profile(1, 0.0);
  const ExtVector g0 = p.grad_psi({Point(0.0), 0.0});
  CHECK(g0.x[0] == 0.0);
  CHECK(g0.y == 0.0);
  const ExtVector g9 = p.grad_psi({Point(0.9 * std::cos(1.0)), 0.9 * std::sin(1.0)});
  CHECK(g9.x[0] == 0.0);
  CHECK(g9.y == 0.0);

  const ExtPoint X{Point(0.5), 0.0};
  const double h = 1e-5;
  const double fd = (p.psi({Point(0.5 + h), 0.0}) - p.psi({Point(0.5 - h), 0.0})) / (2 * h);
  const double exact = p.grad_psi(X).x[0];
  CHECK(exact == Approx(p.phi(X) * 0.5).epsilon(1e-15));
  CHECK(std::abs(fd - exact) <= 1e-6 * std::abs(exact));
}

TEST_CASE("grad_psi points outward and phi is even in y") {
  const BumpProfile& p = profile(2, -0.5);
  for (double t = 0.0; t < 6.2; t += 0.7) {
    const ExtPoint X{Point(0.4 * std::cos(t), 0.2 * std::sin(t)), 0.3 * std::sin(2 * t)};
    const ExtVector g = p.grad_psi(X);
    const double dot = g.x.dot(X.x) + g.y * X.y;
    CHECK(dot == Approx(p.phi(X) * (X.x.norm2() + X.y * X.y)).epsilon(1e-13));
    CHECK(dot >= 0.0);
    CHECK(p.phi({X.x, -X.y}) == p.phi(X));
  }
}
