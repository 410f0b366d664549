#include "fracmv/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "fracmv/numerics.hpp"

namespace fracmv {

namespace {

template <class F>
void parallel_for(std::size_t count, F&& body) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double segment_distance(const Point& x, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.norm2();
  double t = len2 > 0.0 ? ((x - a)[0] * ab[0] + (x - a)[1] * ab[1]) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(x, a + ab * t);
}

double ball_volume(int n, double rho) {
  return n == 1 ? 2.0 * rho : std::numbers::pi * rho * rho;
}

struct BallIntegral {
  double volume;
  double integral;
};

// Midpoint rule on B(c, rho): uniform cells in n = 1, equal-area polar cells in n = 2.
template <class G>
double ball_mean(int n, const Point& c, double rho, int m, G&& g) {
  double sum = 0.0;
  if (n == 1) {
    for (int k = 0; k < m; ++k) sum += g(Point(c[0] - rho + rho * (2.0 * k + 1.0) / m));
    return sum / m;
  }
  const int angles = 2 * m;
  for (int i = 0; i < m; ++i) {
    const double r = rho * std::sqrt((i + 0.5) / m);
    for (int j = 0; j < angles; ++j) {
      const double t = 2.0 * std::numbers::pi * (j + 0.5) / angles;
      sum += g(c + Point(std::cos(t), std::sin(t)) * r);
    }
  }
  return sum / (static_cast<double>(m) * angles);
}

template <class G>
std::vector<BallIntegral> family_integrals(int n, const Point& x, const BallFamily& family, G&& g) {
  if (!(family.r_min > 0.0) || !(family.r_max >= family.r_min) || !(family.ratio > 1.0) ||
      family.resolution < 1)
    throw std::invalid_argument("BallFamily: need 0 < r_min <= r_max, ratio > 1, resolution >= 1");
  std::vector<BallIntegral> out;
  for (double rho : family.radii()) {
    for (double t : family.offsets) {
      if (t < 0.0 || t >= 1.0) throw std::invalid_argument("BallFamily: offsets must lie in [0, 1)");
      std::vector<Point> centres;
      if (t == 0.0) {
        centres.push_back(x);
      } else {
        for (int i = 0; i < n; ++i) {
          Point e = Point::zero(n);
          e[i] = t * rho;
          centres.push_back(x + e);
          centres.push_back(x - e);
        }
      }
      for (const Point& c : centres) {
        const double vol = ball_volume(n, rho);
        out.push_back({vol, vol * ball_mean(n, c, rho, family.resolution, g)});
      }
    }
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Breakpoints of a one-dimensional field: ends of its singular spheres.
std::vector<double> singular_points_1d(const ScalarField& f) {
  std::vector<double> out;
  for (const SingularSphere& s : f.singular) {
    out.push_back(s.center[0] - s.radius);
    if (s.radius > 0.0) out.push_back(s.center[0] + s.radius);
  }
  return out;
}

// Composite rule on [-W, W] with uniform panels, plus breakpoints at the given
// points and a geometric ladder of width `h` around each of them.
QuadratureRule window_rule_1d(double W, int panels, int nodes, const std::vector<double>& points,
                              double h) {
  std::vector<double> br;
  for (int k = 0; k <= panels; ++k) br.push_back(-W + 2.0 * W * k / panels);
  const double coarse = 2.0 * W / panels;
  for (double c : points) {
    if (c <= -W || c >= W) continue;
    br.push_back(c);
    if (h > 0.0)
      for (double d = h; d < coarse; d *= 2.0) {
        br.push_back(c - d);
        br.push_back(c + d);
      }
  }
  std::sort(br.begin(), br.end());
  std::vector<double> clipped;
  for (double b : br) {
    b = std::clamp(b, -W, W);
    if (clipped.empty() || b - clipped.back() > 1e-14 * std::max(1.0, W)) clipped.push_back(b);
  }
  return composite_legendre(clipped, nodes);
}

struct WindowRule {
  std::vector<Point> nodes;
  std::vector<double> weights;
};

WindowRule window_rule(const ScalarField& f, const BesovWindow& w, double h, double shift) {
  WindowRule out;
  if (f.n == 1) {
    std::vector<double> pts = singular_points_1d(f);
    const std::size_t base = pts.size();
    for (std::size_t i = 0; i < base; ++i) pts.push_back(pts[i] - shift);
    const QuadratureRule q = window_rule_1d(w.W, w.x_panels, w.x_nodes, pts, h);
    for (std::size_t k = 0; k < q.size(); ++k) {
      out.nodes.push_back(Point(q.nodes[k]));
      out.weights.push_back(q.weights[k]);
    }
    return out;
  }
  const QuadratureRule q = window_rule_1d(w.W, w.x_panels, w.x_nodes, {}, 0.0);
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) {
      out.nodes.push_back(Point(q.nodes[i], q.nodes[j]));
      out.weights.push_back(q.weights[i] * q.weights[j]);
    }
  return out;
}

void validate_window(const BesovWindow& w) {
  if (!(w.h_max > 0.0) || !(w.W > 0.0) || w.shells < 1 || w.h_nodes < 1 || w.x_panels < 1 ||
      w.x_nodes < 1)
    throw std::invalid_argument("BesovWindow: sizes must be positive");
}

}  // namespace

// ---------------------------------------------------------------- Domain

Domain Domain::ball(const Point& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("Domain::ball: radius must be positive");
  Domain d;
  d.kind_ = DomainKind::ball;
  d.n_ = center.n;
  d.a_ = center;
  d.radius_ = radius;
  return d;
}

Domain Domain::box(const Point& lo, const Point& hi) {
  if (lo.n != hi.n) throw std::invalid_argument("Domain::box: dimension mismatch");
  for (int i = 0; i < lo.n; ++i)
    if (!(hi[i] > lo[i])) throw std::invalid_argument("Domain::box: need lo < hi in every axis");
  Domain d;
  d.kind_ = lo.n == 1 ? DomainKind::interval : DomainKind::box;
  d.n_ = lo.n;
  d.a_ = lo;
  d.b_ = hi;
  return d;
}

Domain Domain::interval(double lo, double hi) { return box(Point(lo), Point(hi)); }

Domain Domain::polygon(std::vector<Point> vertices) {
  if (vertices.size() < 3) throw std::invalid_argument("Domain::polygon: need at least 3 vertices");
  for (const Point& v : vertices)
    if (v.n != 2) throw std::invalid_argument("Domain::polygon: vertices must be planar");
  Domain d;
  d.kind_ = DomainKind::polygon;
  d.n_ = 2;
  d.vertices_ = std::move(vertices);
  return d;
}

bool Domain::contains(const Point& x) const {
  if (x.n != n_) return false;
  switch (kind_) {
    case DomainKind::ball:
      return distance(x, a_) < radius_;
    case DomainKind::box:
    case DomainKind::interval:
      for (int i = 0; i < n_; ++i)
        if (!(x[i] > a_[i] && x[i] < b_[i])) return false;
      return true;
    case DomainKind::polygon: {
      bool inside = false;
      const std::size_t m = vertices_.size();
      for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
        const Point& p = vertices_[i];
        const Point& q = vertices_[j];
        if ((p[1] > x[1]) != (q[1] > x[1]) &&
            x[0] < (q[0] - p[0]) * (x[1] - p[1]) / (q[1] - p[1]) + p[0])
          inside = !inside;
      }
      return inside && boundary_distance(x) > 0.0;
    }
  }
  return false;
}

double Domain::boundary_distance(const Point& x) const {
  if (x.n != n_) throw std::invalid_argument("Domain: dimension mismatch");
  switch (kind_) {
    case DomainKind::ball:
      return std::abs(radius_ - distance(x, a_));
    case DomainKind::box:
    case DomainKind::interval: {
      double d = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n_; ++i) d = std::min({d, x[i] - a_[i], b_[i] - x[i]});
      return std::abs(d);
    }
    case DomainKind::polygon: {
      double d = std::numeric_limits<double>::infinity();
      const std::size_t m = vertices_.size();
      for (std::size_t i = 0; i < m; ++i)
        d = std::min(d, segment_distance(x, vertices_[i], vertices_[(i + 1) % m]));
      return d;
    }
  }
  return 0.0;
}

double Domain::distance_to_boundary(const Point& x) const {
  return contains(x) ? boundary_distance(x) : 0.0;
}

double Domain::diameter() const {
  switch (kind_) {
    case DomainKind::ball:
      return 2.0 * radius_;
    case DomainKind::box:
    case DomainKind::interval:
      return distance(a_, b_);
    case DomainKind::polygon: {
      double d = 0.0;
      for (const Point& p : vertices_)
        for (const Point& q : vertices_) d = std::max(d, distance(p, q));
      return d;
    }
  }
  return 0.0;
}

double Domain::extent() const {
  switch (kind_) {
    case DomainKind::ball:
      return a_.norm() + radius_;
    case DomainKind::box:
    case DomainKind::interval: {
      double s = 0.0;
      for (int i = 0; i < n_; ++i) {
        const double m = std::max(std::abs(a_[i]), std::abs(b_[i]));
        s += m * m;
      }
      return std::sqrt(s);
    }
    case DomainKind::polygon: {
      double m = 0.0;
      for (const Point& v : vertices_) m = std::max(m, v.norm());
      return m;
    }
  }
  return 0.0;
}

std::vector<Point> Domain::interior_points(int count, std::uint64_t seed) const {
  if (count < 1) return {};
  std::vector<Point> nodes;
  std::vector<double> weights;
  quadrature(8, nodes, weights);
  const double floor = 0.1 * diameter();
  std::vector<Point> pool;
  for (const Point& p : nodes)
    if (distance_to_boundary(p) >= floor) pool.push_back(p);
  if (pool.empty()) throw std::invalid_argument("Domain: no interior points away from the boundary");
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  if (pool.size() > static_cast<std::size_t>(count)) pool.resize(static_cast<std::size_t>(count));
  return pool;
}

void Domain::quadrature(int panels, std::vector<Point>& nodes, std::vector<double>& weights) const {
  if (panels < 1) throw std::invalid_argument("Domain::quadrature: panels must be positive");
  constexpr int kNodes = 6;
  nodes.clear();
  weights.clear();
  auto axis_rule = [&](double lo, double hi) {
    std::vector<double> br;
    for (int k = 0; k <= panels; ++k) br.push_back(lo + (hi - lo) * k / panels);
    return composite_legendre(br, kNodes);
  };
  switch (kind_) {
    case DomainKind::interval:
    case DomainKind::box: {
      const QuadratureRule qx = axis_rule(a_[0], b_[0]);
      if (n_ == 1) {
        for (std::size_t i = 0; i < qx.size(); ++i) {
          nodes.push_back(Point(qx.nodes[i]));
          weights.push_back(qx.weights[i]);
        }
        return;
      }
      const QuadratureRule qy = axis_rule(a_[1], b_[1]);
      for (std::size_t i = 0; i < qx.size(); ++i)
        for (std::size_t j = 0; j < qy.size(); ++j) {
          nodes.push_back(Point(qx.nodes[i], qy.nodes[j]));
          weights.push_back(qx.weights[i] * qy.weights[j]);
        }
      return;
    }
    case DomainKind::ball: {
      if (n_ == 1) {
        Domain::interval(a_[0] - radius_, a_[0] + radius_).quadrature(panels, nodes, weights);
        return;
      }
      const QuadratureRule qr = axis_rule(0.0, radius_);
      const int angles = 8 * panels;
      for (std::size_t i = 0; i < qr.size(); ++i)
        for (int j = 0; j < angles; ++j) {
          const double t = 2.0 * std::numbers::pi * (j + 0.5) / angles;
          nodes.push_back(a_ + Point(std::cos(t), std::sin(t)) * qr.nodes[i]);
          weights.push_back(qr.weights[i] * qr.nodes[i] * 2.0 * std::numbers::pi / angles);
        }
      return;
    }
    case DomainKind::polygon: {
      Point lo(vertices_[0][0], vertices_[0][1]);
      Point hi = lo;
      for (const Point& v : vertices_)
        for (int i = 0; i < 2; ++i) {
          lo[i] = std::min(lo[i], v[i]);
          hi[i] = std::max(hi[i], v[i]);
        }
      std::vector<Point> bn;
      std::vector<double> bw;
      Domain::box(lo, hi).quadrature(panels, bn, bw);
      for (std::size_t k = 0; k < bn.size(); ++k)
        if (contains(bn[k])) {
          nodes.push_back(bn[k]);
          weights.push_back(bw[k]);
        }
      return;
    }
  }
}

std::string Domain::describe() const {
  char buf[160];
  switch (kind_) {
    case DomainKind::ball:
      std::snprintf(buf, sizeof buf, "ball(center=%s,radius=%g)", format_point(a_).c_str(), radius_);
      return buf;
    case DomainKind::interval:
      std::snprintf(buf, sizeof buf, "interval(%g,%g)", a_[0], b_[0]);
      return buf;
    case DomainKind::box:
      std::snprintf(buf, sizeof buf, "box(%s,%s)", format_point(a_).c_str(), format_point(b_).c_str());
      return buf;
    case DomainKind::polygon:
      std::snprintf(buf, sizeof buf, "polygon(%zu vertices)", vertices_.size());
      return buf;
  }
  return "domain";
}

double distance_to_boundary(const Domain& domain, const Point& x) {
  return domain.distance_to_boundary(x);
}

// ---------------------------------------------------------------- maximal functions

std::vector<double> BallFamily::radii() const {
  std::vector<double> out;
  for (double r = r_max; r >= r_min * (1.0 - 1e-12); r /= ratio) out.push_back(r);
  std::reverse(out.begin(), out.end());
  return out;
}

double sharp_maximal(const ScalarField& f, const Point& x, double lambda, const BallFamily& family) {
  return sharp_maximal(f, x, std::vector<double>{lambda}, family).front();
}

std::vector<double> sharp_maximal(const ScalarField& f, const Point& x,
                                  const std::vector<double>& lambdas, const BallFamily& family) {
  if (f.n != x.n) throw std::invalid_argument("sharp_maximal: dimension mismatch");
  for (double lambda : lambdas)
    if (!(lambda > 0.0 && lambda < 1.0))
      throw std::invalid_argument("sharp_maximal: lambda must lie in (0,1)");
  const double fx = f(x);
  const auto balls = family_integrals(x.n, x, family, [&](const Point& y) { return std::abs(f(y) - fx); });
  std::vector<double> best(lambdas.size(), 0.0);
  for (std::size_t l = 0; l < lambdas.size(); ++l)
    for (const BallIntegral& b : balls)
      best[l] = std::max(best[l], b.integral * std::pow(b.volume, -1.0 - lambdas[l] / x.n));
  return best;
}

double hl_maximal(const ScalarField& f, const Point& x, const BallFamily& family) {
  if (f.n != x.n) throw std::invalid_argument("hl_maximal: dimension mismatch");
  const auto balls = family_integrals(x.n, x, family, [&](const Point& y) { return std::abs(f(y)); });
  double best = 0.0;
  for (const BallIntegral& b : balls) best = std::max(best, b.integral / b.volume);
  return best;
}

// ---------------------------------------------------------------- regularity

double RegularityParams::tau(int n) const { return 1.0 / (1.0 / p + alpha / n); }

void RegularityParams::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("RegularityParams: lambda must lie in (0,1)");
  if (!(p > 1.0 && std::isfinite(p)))
    throw std::invalid_argument("RegularityParams: p must lie in (1,inf)");
  if (!(alpha > 0.0)) throw std::invalid_argument("RegularityParams: alpha must be positive");
}

double Lemma33Report::max_ratio(double factor) const {
  double m = 0.0;
  for (const Lemma33Sample& s : samples)
    if (s.factor == factor) m = std::max(m, s.ratio);
  return m;
}

double Lemma33Report::median_ratio(double factor) const {
  std::vector<double> v;
  for (const Lemma33Sample& s : samples)
    if (s.factor == factor) v.push_back(s.ratio);
  return median(std::move(v));
}

Lemma33Report lemma33_ratio(const RadialKernelTable& table, const ScalarField& f,
                            const Domain& domain, double lambda, const std::vector<Point>& grid,
                            const std::vector<double>& factors, const BallFamily& family) {
  return lemma33_ratio(table, f, domain, std::vector<double>{lambda}, grid, factors, family).front();
}

std::vector<Lemma33Report> lemma33_ratio(const RadialKernelTable& table, const ScalarField& f,
                                         const Domain& domain, const std::vector<double>& lambdas,
                                         const std::vector<Point>& grid,
                                         const std::vector<double>& factors,
                                         const BallFamily& family) {
  for (double lambda : lambdas)
    if (!(lambda > 0.0 && lambda < 1.0))
      throw std::invalid_argument("lemma33_ratio: lambda must lie in (0,1)");
  for (double c : factors)
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("lemma33_ratio: factors must lie in (0,1)");
  for (const Point& x : grid)
    if (!domain.contains(x)) throw std::invalid_argument("lemma33_ratio: grid point outside D");

  std::vector<Lemma33Report> reports(lambdas.size());
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    reports[l].lambda = lambdas[l];
    reports[l].samples.resize(grid.size() * factors.size());
  }
  parallel_for(grid.size(), [&](std::size_t i) {
    const Point& x = grid[i];
    const double delta = domain.distance_to_boundary(x);
    const std::vector<double> sharp = sharp_maximal(f, x, lambdas, family);
    for (std::size_t j = 0; j < factors.size(); ++j) {
      const double r = factors[j] * delta;
      const double g = gradient_of_solution(table, f, x, r).value.norm();
      for (std::size_t l = 0; l < lambdas.size(); ++l) {
        Lemma33Sample& s = reports[l].samples[i * factors.size() + j];
        s.x = x;
        s.factor = factors[j];
        s.r = r;
        s.gradient_norm = g;
        s.sharp = sharp[l];
        const double denom = std::pow(r, lambdas[l] - 1.0) * sharp[l];
        s.ratio = denom > 0.0 ? g / denom : 0.0;
      }
    }
  });
  // gradients below quadrature noise count as zero
  const double noise = 1e-8 * std::max(1.0, f.scale);
  for (Lemma33Report& report : reports)
    for (const Lemma33Sample& s : report.samples)
      if (s.sharp == 0.0 && s.gradient_norm > noise) report.violation = true;
  return reports;
}

BesovResult besov_seminorm(const ScalarField& f, double lambda, double p, const BesovWindow& window) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("besov_seminorm: lambda must lie in (0,1)");
  if (!(p > 1.0 && std::isfinite(p))) throw std::invalid_argument("besov_seminorm: p must lie in (1,inf)");
  validate_window(window);
  const int n = f.n;
  const int angles = n == 1 ? 2 : 32;
  BesovResult result;
  result.shells.assign(static_cast<std::size_t>(window.shells), 0.0);
  parallel_for(result.shells.size(), [&](std::size_t k) {
    const double hi = window.h_max * std::pow(2.0, -static_cast<double>(k));
    const QuadratureRule hr = gauss_legendre(window.h_nodes, 0.5 * hi, hi);
    double shell = 0.0;
    for (std::size_t i = 0; i < hr.size(); ++i) {
      const double t = hr.nodes[i];
      const double radial = hr.weights[i] * std::pow(t, n - 1) * std::pow(t, -n - lambda * p);
      for (int j = 0; j < angles; ++j) {
        const double theta = 2.0 * std::numbers::pi * (j + 0.5) / angles;
        const Point h = n == 1 ? Point(j == 0 ? t : -t) : Point(std::cos(theta), std::sin(theta)) * t;
        const double aw = n == 1 ? 1.0 : 2.0 * std::numbers::pi / angles;
        const WindowRule xr = window_rule(f, window, t, h[0]);
        double inner = 0.0;
        for (std::size_t q = 0; q < xr.nodes.size(); ++q)
          inner += xr.weights[q] * std::pow(std::abs(f(xr.nodes[q] + h) - f(xr.nodes[q])), p);
        shell += radial * aw * inner;
      }
    }
    result.shells[k] = shell;
  });
  double total = 0.0;
  for (double s : result.shells) total += s;
  if (!std::isfinite(total)) throw EvaluationError("besov_seminorm: non-finite field sample");
  result.value = std::pow(total, 1.0 / p);
  const std::size_t m = result.shells.size();
  if (m >= 4) {
    bool growing = true;
    for (std::size_t k = m - 3; k < m; ++k)
      if (!(result.shells[k] > 0.0 && result.shells[k] >= 0.99 * result.shells[k - 1])) growing = false;
    result.divergence_warning = growing;
  }
  return result;
}

double lp_norm(const ScalarField& f, double p, const BesovWindow& window) {
  if (!(p >= 1.0 && std::isfinite(p))) throw std::invalid_argument("lp_norm: p must lie in [1,inf)");
  validate_window(window);
  const WindowRule xr = window_rule(f, window, 0.0, 0.0);
  double sum = 0.0;
  for (std::size_t q = 0; q < xr.nodes.size(); ++q)
    sum += xr.weights[q] * std::pow(std::abs(f(xr.nodes[q])), p);
  return std::pow(sum, 1.0 / p);
}

Lemma32Result lemma32_ratio(const RadialKernelTable& table, const ScalarField& f,
                            const Domain& domain, double lambda, double p, int panels,
                            const BesovWindow& window) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("lemma32_ratio: lambda must lie in (0,1)");
  if (!(p > 1.0 && std::isfinite(p))) throw std::invalid_argument("lemma32_ratio: p must lie in (1,inf)");
  std::vector<Point> nodes;
  std::vector<double> weights;
  domain.quadrature(panels, nodes, weights);
  std::vector<double> terms(nodes.size(), 0.0);
  parallel_for(nodes.size(), [&](std::size_t k) {
    const double delta = domain.distance_to_boundary(nodes[k]);
    const double g = gradient_of_solution(table, f, nodes[k], 0.5 * delta).value.norm();
    terms[k] = weights[k] * std::pow(std::pow(delta, 1.0 - lambda) * g, p);
  });
  double sum = 0.0;
  for (double t : terms) sum += t;
  Lemma32Result out;
  out.weighted_gradient = std::pow(sum, 1.0 / p);
  const BesovResult b = besov_seminorm(f, lambda, p, window);
  out.besov = b.value;
  out.besov_divergent = b.divergence_warning;
  out.lp = lp_norm(f, p, window);
  const double denom = out.besov + out.lp;
  out.ratio = denom > 0.0 ? out.weighted_gradient / denom : 0.0;
  return out;
}

// ---------------------------------------------------------------- reports

std::string format_point(const Point& x) {
  char buf[64];
  if (x.n == 1)
    std::snprintf(buf, sizeof buf, "%.10g", x[0]);
  else
    std::snprintf(buf, sizeof buf, "%.10g;%.10g", x[0], x[1]);
  return buf;
}

std::string csv_header() { return "field_id,x,r,lambda,p,value,kind"; }

std::string csv_line(const ReportRow& row) {
  auto num = [](double v, const char* pattern) {
    if (std::isnan(v)) return std::string();
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return std::string(buf);
  };
  return row.field_id + "," + row.x + "," + num(row.r, "%.10g") + "," + num(row.lambda, "%.10g") +
         "," + num(row.p, "%.10g") + "," + num(row.value, "%.17g") + "," + row.kind;
}

}  // namespace fracmv
