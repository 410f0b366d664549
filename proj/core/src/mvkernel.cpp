#include "fracmv/mvkernel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "fracmv/analysis.hpp"
#include "fracmv/numerics.hpp"
#include "fracmv/polar.hpp"

namespace fracmv {

std::vector<double> GridSpec::nodes() const {
  if (uniform_intervals < 1 || geometric_intervals < 0 || !(uniform_end > 0.0) ||
      !(end >= uniform_end))
    throw std::invalid_argument("invalid radial grid");
  std::vector<double> out;
  for (int i = 0; i <= uniform_intervals; ++i) out.push_back(uniform_end * i / uniform_intervals);
  const double ratio = std::log(end / uniform_end);
  for (int j = 1; j <= geometric_intervals; ++j)
    out.push_back(j == geometric_intervals ? end
                                           : uniform_end * std::exp(ratio * j / geometric_intervals));
  return out;
}

std::string GridSpec::describe() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "uniform:%d:%.17g;geometric:%d:%.17g", uniform_intervals,
                uniform_end, geometric_intervals, end);
  return buf;
}

GridSpec GridSpec::parse(const std::string& text) {
  GridSpec g;
  char tail = 0;
  if (std::sscanf(text.c_str(), "uniform:%d:%lf;geometric:%d:%lf%c", &g.uniform_intervals,
                  &g.uniform_end, &g.geometric_intervals, &g.end, &tail) != 4)
    throw std::invalid_argument("malformed grid description '" + text + "'");
  g.nodes();  // validates
  return g;
}

RadialKernelTable::RadialKernelTable(Params params, double kappa, double poisson_c, GridSpec grid,
                                     std::string built_with, std::vector<double> rho,
                                     std::vector<double> phi, std::vector<double> phi_prime)
    : params_(params),
      kappa_(kappa),
      poisson_c_(poisson_c),
      grid_(grid),
      built_with_(std::move(built_with)),
      rho_(std::move(rho)),
      phi_(std::move(phi)),
      phi_prime_(std::move(phi_prime)),
      beta_(params.n() + 1.0 - params.a()) {
  if (rho_.size() < 2 || phi_.size() != rho_.size() || phi_prime_.size() != rho_.size())
    throw std::invalid_argument("kernel table columns must have equal length >= 2");
  if (rho_.front() != 0.0) throw std::invalid_argument("kernel table must start at rho = 0");
  for (std::size_t i = 1; i < rho_.size(); ++i)
    if (!(rho_[i] > rho_[i - 1]))
      throw std::invalid_argument("kernel table radii must be strictly increasing");
  uniform_step_ = grid_.uniform_end / grid_.uniform_intervals;
  // tail c0 rho^-beta + c2 rho^-(beta+2) through value and slope at the last node
  const double R = rho_.back();
  const double F = phi_.back();
  const double G = phi_prime_.back();
  const double w = -(G * R + beta_ * F) / 2.0;
  const double u = F - w;
  c0_ = u * std::pow(R, beta_);
  c2_ = w * std::pow(R, beta_ + 2.0);

  // slopes of Phi' from five-point Lagrange differentiation; Phi' is odd at 0
  const std::size_t m = rho_.size();
  phi_second_.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> xs;
    std::vector<double> ys;
    const std::ptrdiff_t lo = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(i) - 2, -2,
                                                         static_cast<std::ptrdiff_t>(m) - 5);
    for (std::ptrdiff_t j = lo; j < lo + 5; ++j) {
      if (j < 0) {
        xs.push_back(-rho_[static_cast<std::size_t>(-j)]);
        ys.push_back(-phi_prime_[static_cast<std::size_t>(-j)]);
      } else {
        xs.push_back(rho_[static_cast<std::size_t>(j)]);
        ys.push_back(phi_prime_[static_cast<std::size_t>(j)]);
      }
    }
    const double x0 = rho_[i];
    const std::size_t self = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) - lo);
    double d = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
      if (j == self) {
        double s = 0.0;
        for (std::size_t k = 0; k < 5; ++k)
          if (k != self) s += 1.0 / (x0 - xs[k]);
        d += ys[j] * s;
        continue;
      }
      double l = 1.0 / (xs[j] - x0);
      for (std::size_t k = 0; k < 5; ++k)
        if (k != self && k != j) l *= (x0 - xs[k]) / (xs[j] - xs[k]);
      d += ys[j] * l;
    }
    phi_second_[i] = d;
  }
}

std::size_t RadialKernelTable::locate(double rho) const {
  const std::size_t uniform_count = static_cast<std::size_t>(grid_.uniform_intervals);
  if (rho < grid_.uniform_end && rho_.size() > uniform_count) {
    const auto i = static_cast<std::size_t>(rho / uniform_step_);
    return std::min(i, uniform_count - 1);
  }
  const auto it = std::upper_bound(rho_.begin(), rho_.end(), rho);
  const auto i = static_cast<std::size_t>(it - rho_.begin());
  return std::min(i == 0 ? 0 : i - 1, rho_.size() - 2);
}

double RadialKernelTable::phi(double rho) const {
  rho = std::abs(rho);
  if (rho >= rho_.back()) return c0_ * std::pow(rho, -beta_) + c2_ * std::pow(rho, -beta_ - 2.0);
  const std::size_t i = locate(rho);
  const double h = rho_[i + 1] - rho_[i];
  const double t = (rho - rho_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t3 * t;
  const double t5 = t4 * t;
  const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double h3 = 10 * t3 - 15 * t4 + 6 * t5;
  const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double h5 = 0.5 * (t3 - 2 * t4 + t5);
  return h0 * phi_[i] + h1 * h * phi_prime_[i] + h2 * h * h * phi_second_[i] +
         h3 * phi_[i + 1] + h4 * h * phi_prime_[i + 1] + h5 * h * h * phi_second_[i + 1];
}

double RadialKernelTable::phi_prime(double rho) const {
  const double sign = rho < 0.0 ? -1.0 : 1.0;
  rho = std::abs(rho);
  if (rho >= rho_.back())
    return sign * (-beta_ * c0_ * std::pow(rho, -beta_ - 1.0) -
                   (beta_ + 2.0) * c2_ * std::pow(rho, -beta_ - 3.0));
  const std::size_t i = locate(rho);
  const double h = rho_[i + 1] - rho_[i];
  const double t = (rho - rho_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return sign * ((2 * t3 - 3 * t2 + 1) * phi_prime_[i] + (t3 - 2 * t2 + t) * h * phi_second_[i] +
                 (-2 * t3 + 3 * t2) * phi_prime_[i + 1] + (t3 - t2) * h * phi_second_[i + 1]);
}

double RadialKernelTable::mass() const { return mass_beyond(0.0); }

double RadialKernelTable::mass_beyond(double from) const {
  const int n = params_.n();
  const double R = rho_.back();
  double total = 0.0;
  const double lo = std::max(from, R);
  total += c0_ * std::pow(lo, n - beta_) / (beta_ - n) +
           c2_ * std::pow(lo, n - beta_ - 2.0) / (beta_ + 2.0 - n);
  if (from < R) {
    // exact integral of the quintic interpolant times rho^{n-1} (degree <= 6)
    const QuadratureRule unit = gauss_legendre(4, 0.0, 1.0);
    for (std::size_t i = locate(from); i + 1 < rho_.size(); ++i) {
      const double a = std::max(rho_[i], from);
      const double b = rho_[i + 1];
      if (b <= a) continue;
      for (std::size_t k = 0; k < unit.size(); ++k) {
        const double r = a + (b - a) * unit.nodes[k];
        total += (b - a) * unit.weights[k] * std::pow(r, n - 1) * phi(r);
      }
    }
  }
  return sphere_area(n) * total;
}

double RadialKernelTable::derivative_mass_beyond(double from) const {
  const int n = params_.n();
  const double R = std::max(from, rho_.back());
  return sphere_area(n) * (beta_ * std::abs(c0_) * std::pow(R, n - beta_ - 1.0) / (beta_ + 1.0 - n) +
                           (beta_ + 2.0) * std::abs(c2_) * std::pow(R, n - beta_ - 3.0) /
                               (beta_ + 3.0 - n));
}

RadialKernelTable build_table(const Params& params, const BuildOptions& options) {
  const BumpProfile profile = normalize(params.n(), params.a());
  const ExtensionKernel kernel(params);
  const std::vector<double> rho = options.grid.nodes();
  std::vector<double> phi(rho.size());
  std::vector<double> phi_prime(rho.size());

  // residual probes at a few nodes with the refined resolution
  std::vector<std::size_t> probes;
  for (std::size_t i = 0; i < rho.size(); i += 32) probes.push_back(i);
  std::vector<double> probe_residual(probes.size(), 0.0);

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;
  const std::size_t jobs = rho.size() + probes.size();
  auto worker = [&]() {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const std::size_t i = job < rho.size() ? job : probes[job - rho.size()];
      try {
        if (job < rho.size()) {
          const KernelValue v = kernel_radial(profile, kernel, rho[i], options.resolution);
          if (!std::isfinite(v.phi) || !std::isfinite(v.phi_prime))
            throw EvaluationError("non-finite kernel value");
          phi[i] = v.phi;
          phi_prime[i] = v.phi_prime;
        } else {
          const KernelValue v =
              kernel_radial(profile, kernel, rho[i], options.resolution.refined());
          const KernelValue b = kernel_radial(profile, kernel, rho[i], options.resolution);
          probe_residual[job - rho.size()] =
              std::max(std::abs(v.phi - b.phi), std::abs(v.phi_prime - b.phi_prime));
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (first_error.empty()) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.17g", rho[i]);
          first_error = std::string("kernel node rho=") + buf + ": " + e.what();
        }
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!first_error.empty()) throw EvaluationError(first_error);

  double residual = 0.0;
  for (double r : probe_residual) residual = std::max(residual, r);
  char buf[48];
  std::snprintf(buf, sizeof buf, ";residual:%.3g", residual);
  return RadialKernelTable(params, profile.kappa(), kernel.C(), options.grid,
                           options.resolution.describe() + buf, rho, std::move(phi),
                           std::move(phi_prime));
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw std::runtime_error("kernel table: malformed " + what + " '" + text + "'");
  return v;
}

}  // namespace

void write_table(std::ostream& out, const RadialKernelTable& table) {
  out << "n=" << table.params().n() << '\n';
  out << "a=" << fmt17(table.params().a()) << '\n';
  out << "grid=" << table.grid().describe() << '\n';
  out << "built_with=" << table.built_with() << '\n';
  out << "kappa=" << fmt17(table.kappa()) << '\n';
  out << "poisson_c=" << fmt17(table.poisson_c()) << '\n';
  out << "rho,phi,phi_prime\n";
  for (std::size_t i = 0; i < table.rho().size(); ++i)
    out << fmt17(table.rho()[i]) << ',' << fmt17(table.phi_values()[i]) << ','
        << fmt17(table.psi_profile()[i]) << '\n';
}

RadialKernelTable read_table(std::istream& in) {
  std::string line;
  auto header = [&](const std::string& key) {
    if (!std::getline(in, line) || line.rfind(key + "=", 0) != 0)
      throw std::runtime_error("kernel table: expected header '" + key + "='");
    return line.substr(key.size() + 1);
  };
  const std::string n_text = header("n");
  const int n = n_text == "1" ? 1 : n_text == "2" ? 2 : 0;
  if (n == 0) throw std::runtime_error("kernel table: invalid dimension '" + n_text + "'");
  const double a = parse_double(header("a"), "a");
  const GridSpec grid = GridSpec::parse(header("grid"));
  const std::string built_with = header("built_with");
  const double kappa = parse_double(header("kappa"), "kappa");
  const double poisson_c = parse_double(header("poisson_c"), "poisson_c");
  if (!std::getline(in, line) || line != "rho,phi,phi_prime")
    throw std::runtime_error("kernel table: missing column header");
  std::vector<double> rho, phi, phi_prime;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string f1, f2, f3;
    if (!std::getline(row, f1, ',') || !std::getline(row, f2, ',') || !std::getline(row, f3))
      throw std::runtime_error("kernel table: malformed row '" + line + "'");
    rho.push_back(parse_double(f1, "rho"));
    phi.push_back(parse_double(f2, "phi"));
    phi_prime.push_back(parse_double(f3, "phi_prime"));
  }
  const std::vector<double> expected = grid.nodes();
  if (expected.size() != rho.size())
    throw std::runtime_error("kernel table: row count does not match the grid");
  return RadialKernelTable(Params::from_a(n, a), kappa, poisson_c, grid, built_with,
                           std::move(rho), std::move(phi), std::move(phi_prime));
}

void save_table(const std::string& path, const RadialKernelTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  write_table(out, table);
  out.flush();
  if (!out) throw std::ios_base::failure("write to '" + path + "' failed");
}

RadialKernelTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "' for reading");
  return read_table(in);
}

namespace {

// Shared radial sweep: sum over radial nodes of weight(rho) * shell(rho), where
// shell integrates f over the sphere of radius rho about x.
struct Cutoff {
  double radius;
  double error;
};

Cutoff convolution_cutoff(const RadialKernelTable& table, const ScalarField& f, const Point& x,
                          double r, double tail_exponent, double tail_coefficient, double tol,
                          const char* who) {
  const double reach = support_reach(f, x);
  if (std::isfinite(reach)) return {reach, 0.0};
  const int n = table.params().n();
  const double d = std::max(f.growth.degree, 0.0);
  const double decay = tail_exponent - n - d;  // kernel decay left after the field growth
  if (!(decay > 0.0))
    throw RejectedField(std::string(who) + ": field '" + f.description +
                        "' grows too fast for the kernel tail");
  // |kernel_r(rho)| <= tail_coefficient r^{-n} (rho/r)^{-tail_exponent} beyond the grid
  const double K = sphere_area(n) * tail_coefficient * std::pow(r, tail_exponent - n) *
                   f.growth.bound * std::pow(2.0, d) / decay;
  double R = std::max({table.rho().back() * r, 1.0 + x.norm(), std::pow(K / tol, 1.0 / decay)});
  constexpr double kMaxCutoff = 1e30;
  if (R > kMaxCutoff)
    throw ToleranceNotMet(std::string(who) + ": far-field bound", K * std::pow(kMaxCutoff, -decay),
                          tol);
  return {R, K * std::pow(R, -decay)};
}

}  // namespace

Estimate phi_r_convolve(const RadialKernelTable& table, const ScalarField& f, const Point& x,
                        double r, const ConvolutionOptions& options) {
  const int n = table.params().n();
  if (f.n != n || x.n != n) throw std::invalid_argument("phi_r_convolve: dimension mismatch");
  if (!(r > 0.0)) throw std::invalid_argument("phi_r_convolve: r must be positive");
  const double R = table.rho().back();
  const double coefficient = std::abs(table.tail_c0()) + std::abs(table.tail_c2()) / (R * R);
  const Cutoff cut =
      convolution_cutoff(table, f, x, r, table.beta(), coefficient, options.tol, "phi_r_convolve");

  RadialLayout layout;
  layout.scale = r;
  layout.core_extent = 2.0;
  layout.core_panels = options.core_panels;
  layout.nodes = options.radial_nodes;
  const RadialRule radial = plan_radial(layout, cut.radius, &f, x);
  const double rn = std::pow(r, -n);
  double sum = 0.0;
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double rho = radial.rho[i];
    const AngularRule ang = angular_rule(x, rho, &f, options.angular_nodes);
    double shell = 0.0;
    for (std::size_t j = 0; j < ang.size(); ++j) shell += ang.weight[j] * f(x + ang.direction[j] * rho);
    sum += radial.weight[i] * std::pow(rho, n - 1) * rn * table.phi(rho / r) * shell;
  }
  if (!std::isfinite(sum)) throw EvaluationError("phi_r_convolve: non-finite field sample");
  return {sum, cut.error};
}

GradientEstimate gradient_of_solution(const RadialKernelTable& table, const ScalarField& f,
                                      const Point& x, double r,
                                      const ConvolutionOptions& options) {
  const int n = table.params().n();
  if (f.n != n || x.n != n) throw std::invalid_argument("gradient_of_solution: dimension mismatch");
  if (!(r > 0.0)) throw std::invalid_argument("gradient_of_solution: r must be positive");
  const double R = table.rho().back();
  const double beta = table.beta();
  const double coefficient =
      beta * std::abs(table.tail_c0()) + (beta + 2.0) * std::abs(table.tail_c2()) / (R * R);
  const Cutoff cut = convolution_cutoff(table, f, x, r, beta + 1.0, coefficient, options.tol * r,
                                        "gradient_of_solution");

  RadialLayout layout;
  layout.scale = r;
  layout.core_extent = 2.0;
  layout.core_panels = options.core_panels;
  layout.nodes = options.radial_nodes;
  const RadialRule radial = plan_radial(layout, cut.radius, &f, x);
  const double fx = f(x);
  const double rn = std::pow(r, -n);
  Point sum = Point::zero(n);
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double rho = radial.rho[i];
    const AngularRule ang = angular_rule(x, rho, &f, options.angular_nodes);
    Point shell = Point::zero(n);
    for (std::size_t j = 0; j < ang.size(); ++j)
      shell = shell + ang.direction[j] * (ang.weight[j] * (f(x + ang.direction[j] * rho) - fx));
    sum = sum + shell * (radial.weight[i] * std::pow(rho, n - 1) * rn * table.phi_prime(rho / r));
  }
  // Psi(w) = Phi'(|w|) w/|w| and z - x = rho sigma, so Psi_r(x - z) carries -sigma
  sum = sum * (-1.0 / r);
  if (!std::isfinite(sum.norm())) throw EvaluationError("gradient_of_solution: non-finite field sample");
  return {sum, cut.error / r};
}

double psi_component(const RadialKernelTable& table, const Point& x, int i) {
  if (i < 0 || i >= table.params().n())
    throw std::invalid_argument("psi_component: coordinate index out of range");
  const double rho = x.norm();
  if (rho == 0.0) return 0.0;
  return table.phi_prime(rho) * x[i] / rho;
}

double extension_mean_value(const BumpProfile& profile,
                            const std::function<double(const ExtPoint&)>& v, const Point& x,
                            double r, int resolution) {
  if (x.n != profile.n()) throw std::invalid_argument("extension_mean_value: dimension mismatch");
  if (!(r > 0.0)) throw std::invalid_argument("extension_mean_value: r must be positive");
  const double scale = std::pow(r, -(profile.n() + 1.0 + profile.a()));
  auto g = [&](const ExtPoint& X) {
    const ExtPoint rel{(X.x - x) * (1.0 / r), X.y / r};
    const double w = profile.phi(rel);
    if (w == 0.0) return 0.0;
    return scale * w * v(X);
  };
  return integrate_ball_weighted(g, ExtPoint{x, 0.0}, r, profile.a(), resolution);
}

}  // namespace fracmv
