#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "fracmv/fraclap.hpp"
#include "fracmv/mvkernel.hpp"
#include "oracles.hpp"
#include "table_cache.hpp"

using namespace fracmv;
using doctest::Approx;

TEST_CASE("phi_pointwise is radial in n = 2") {
  const Params p = Params::from_a(2, 0.0);
  const BumpProfile prof = normalize(2, 0.0);
  const ExtensionKernel k(p);
  const double e1 = phi_pointwise(prof, k, Point(0.5, 0.0)).value;
  const double e2 = phi_pointwise(prof, k, Point(0.0, 0.5)).value;
  const double diag = phi_pointwise(prof, k, Point(0.3, 0.4)).value;
  CHECK(std::abs(e1 - e2) < 1e-8);
  CHECK(std::abs(e1 - diag) < 1e-8);
}

TEST_CASE("phi_pointwise at the origin against a Cartesian Simpson oracle") {
  // n = 1, a = 0: Phi(0) = 2 int_0^{3/4} int_z phi(z, y) y / (pi (z^2 + y^2)) dz dy
  const BumpProfile prof = normalize(1, 0.0);
  const ExtensionKernel k(Params::from_a(1, 0.0));
  const auto inner = [&](double y) {
    if (y >= 0.75) return 0.0;
    const double outer = std::sqrt(0.5625 - y * y);
    const auto g = [&](double z) {
      return prof.kappa() * eta_raw(std::sqrt(z * z + y * y)) * y / (std::numbers::pi * (z * z + y * y));
    };
    if (y >= 0.25) return 2.0 * test::simpson(g, 0.0, outer, 1e-11);
    return 2.0 * test::simpson(g, std::sqrt(0.0625 - y * y), outer, 1e-11);
  };
  const double oracle = 2.0 * test::simpson(inner, 0.0, 0.75, 1e-10, {0.25});
  CHECK(std::abs(phi_pointwise(prof, k, Point(0.0)).value - oracle) < 1e-6);
}

TEST_CASE("phi_pointwise rejects mismatched parameters") {
  const BumpProfile prof = normalize(1, 0.0);
  const ExtensionKernel k(Params::from_a(1, 0.5));
  CHECK_THROWS_AS(phi_pointwise(prof, k, Point(0.1)), std::invalid_argument);
}

TEST_CASE("table invariants") {
  const RadialKernelTable& t = test::cached_table(1, 0.0);
  CHECK(t.rho().front() == 0.0);
  CHECK(t.rho().back() >= 16.0);
  CHECK(std::abs(t.mass() - 1.0) < 1e-4);
  CHECK(std::abs(t.phi_prime(0.0)) < 1e-6);
  for (std::size_t i = 0; i < t.rho().size(); ++i) {
    CHECK(std::isfinite(t.phi_values()[i]));
    if (t.rho()[i] <= 0.75) CHECK(t.phi_values()[i] > 0.0);
    if (t.rho()[i] > 2.0) CHECK(t.phi_values()[i] <= t.phi_values()[i - 1]);
  }
}

TEST_CASE("interpolated table against pointwise recomputation") {
  for (double a : {-0.5, 0.0}) {
    const RadialKernelTable& t = test::cached_table(1, a);
    const BumpProfile prof = t.profile();
    const ExtensionKernel k(t.params());
    for (double rho : {0.37, 1.234, 5.5}) {
      const double direct = phi_pointwise(prof, k, Point(rho)).value;
      CHECK(std::abs(t.phi(rho) - direct) <= 1e-5 * std::abs(direct));
    }
  }
}

TEST_CASE("table decay ratios") {
  const RadialKernelTable& t = test::cached_table(1, -0.5);
  const double beta = 1.0 + 1.0 - t.params().a();
  const auto phi_scaled = [&](double r) { return std::pow(1.0 + r, beta) * std::abs(t.phi(r)); };
  const auto psi_scaled = [&](double r) {
    return std::pow(r, beta + 1.0) * std::abs(psi_component(t, Point(r), 0));
  };
  for (double r : {2.0, 4.0}) {
    const double q = phi_scaled(2 * r) / phi_scaled(r);
    CHECK(q >= 0.5);
    CHECK(q <= 2.0);
    const double qp = psi_scaled(2 * r) / psi_scaled(r);
    CHECK(qp >= 0.5);
    CHECK(qp <= 2.0);
  }
}

TEST_CASE("psi_component") {
  const RadialKernelTable& t = test::cached_table(1, 0.0);
  CHECK(psi_component(t, Point(0.0), 0) == 0.0);
  CHECK(psi_component(t, Point(-0.4), 0) == -psi_component(t, Point(0.4), 0));
  // zero mean, with the tail beyond 16 from the analytic continuation
  const auto psi = [&](double x) { return psi_component(t, Point(x), 0); };
  const double core = test::simpson(psi, -16.0, 16.0, 1e-12, {-2.0, 0.0, 2.0});
  CHECK(std::abs(core) < 1e-4);
  // Phi' integrates to the increments of Phi
  const auto dphi = [&](double r) { return t.phi_prime(r); };
  const double inc = test::simpson(dphi, 0.0, 16.0, 1e-12, {0.25, 0.75, 2.0});
  CHECK(std::abs(inc - (t.phi(16.0) - t.phi(0.0))) < 1e-6 * t.phi(0.0));
  // n = 2 components
  const RadialKernelTable& t2 = test::cached_table(2, 0.0);
  const Point x(0.3, 0.4);
  CHECK(psi_component(t2, x, 0) == Approx(t2.phi_prime(0.5) * 0.6).epsilon(1e-14));
  CHECK(psi_component(t2, x, 1) == Approx(t2.phi_prime(0.5) * 0.8).epsilon(1e-14));
}

TEST_CASE("phi_r_convolve examples") {
  const RadialKernelTable& t = test::cached_table(1, 0.0);
  for (double x : {-0.5, 0.0, 0.7})
    for (double r : {0.05, 0.3, 2.0})
      CHECK(std::abs(phi_r_convolve(t, constant_field(1), Point(x), r).value - 1.0) < 2e-4);

  const RadialKernelTable& t75 = test::cached_table(1, -0.5);
  CHECK(std::abs(phi_r_convolve(t75, affine_field(Point(1.0)), Point(0.3), 0.1).value - 0.3) < 1e-4);

  const RadialKernelTable& t40 = test::cached_table(1, 1.0 - 2.0 * 0.4);
  const ScalarField f = ball_poisson_field(1, 0.4, 5);
  for (double r : {0.1, 0.2})
    CHECK(std::abs(phi_r_convolve(t40, f, Point(0.0), r).value - f(Point(0.0))) < 5e-4);
}

TEST_CASE("phi_r_convolve rejects fields outside the growth class") {
  const RadialKernelTable& t = test::cached_table(1, 0.0);
  CHECK_THROWS_AS(phi_r_convolve(t, affine_field(Point(1.0)), Point(0.0), 0.1), RejectedField);
}

TEST_CASE("phi_r_convolve against a rescaled-table Simpson oracle") {
  const RadialKernelTable& t = test::cached_table(1, 0.0);
  const ScalarField f = gaussian_field(Point(0.2), 0.5);
  for (auto [x, r] : {std::pair{0.1, 0.05}, std::pair{-0.3, 0.4}, std::pair{0.6, 1.5}}) {
    const auto g = [&](double z) { return t.phi((x - z) / r) / r * f(Point(z)); };
    const double oracle = test::simpson(g, -12.0, 12.0, 1e-13, {x - r, x, x + r});
    CHECK(std::abs(phi_r_convolve(t, f, Point(x), r, {.tol = 1e-10}).value - oracle) < 1e-8);
  }
}

TEST_CASE("extension_mean_value examples") {
  const Params p = Params::from_s(1, 0.5);
  const BumpProfile prof = normalize(1, p.a());
  const ExtensionKernel k(p);
  const auto one = [](const ExtPoint&) { return 1.0; };
  CHECK(std::abs(extension_mean_value(prof, one, Point(0.1), 0.3) - 1.0) < 1e-8);
  const ScalarField c = constant_field(1);
  const auto v1 = [&](const ExtPoint& X) { return extend(k, c, X.x, X.y).value; };
  CHECK(std::abs(extension_mean_value(prof, v1, Point(0.1), 0.3, 192) - 1.0) < 1e-8);

  const ScalarField f = ball_poisson_field(1, 0.5, 4);
  const auto v = [&](const ExtPoint& X) { return extend(k, f, X.x, X.y).value; };
  const double m2 = extension_mean_value(prof, v, Point(0.0), 0.2, 96);
  const double m4 = extension_mean_value(prof, v, Point(0.0), 0.4, 96);
  CHECK(std::abs(m2 - m4) < 5e-4);
  // Fubini: the same number as the kernel convolution
  const RadialKernelTable& t = test::cached_table(1, 0.0);
  CHECK(std::abs(m4 - phi_r_convolve(t, f, Point(0.0), 0.4).value) < 1e-3);
}

TEST_CASE("kernel property report") {
  const RadialKernelTable& t = test::cached_table(1, 0.0);
  const PropertyReport report = verify_kernel_properties(t);
  REQUIRE(report.checks.size() == 7);
  CHECK(report.all_passed());
  for (const PropertyCheck& c : report.checks) {
    INFO(c.id << ": " << c.detail);
    CHECK(c.passed);
  }
  CHECK(report.checks[2].measured < 1e-4);
  CHECK(std::abs(report.checks[5].measured + 3.0) < 0.1);
}

TEST_CASE("table files round-trip bit-exactly") {
  const RadialKernelTable& t = test::cached_table(1, -0.5);
  std::ostringstream first;
  write_table(first, t);
  std::istringstream in(first.str());
  const RadialKernelTable back = read_table(in);
  std::ostringstream second;
  write_table(second, back);
  CHECK(first.str() == second.str());
  CHECK(back.phi_values() == t.phi_values());
  CHECK(back.psi_profile() == t.psi_profile());
  CHECK(back.kappa() == t.kappa());
}

TEST_CASE("malformed table files are rejected") {
  std::istringstream empty("");
  CHECK_THROWS(read_table(empty));
  std::istringstream truncated("n=1\na=0\n");
  CHECK_THROWS(read_table(truncated));
  CHECK_THROWS(load_table("/nonexistent/kernel.tbl"));
}
