#include "fracmv/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <sstream>

namespace fracmv {

namespace {

struct Reference {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Legendre nodes on [-1, 1] by Newton iteration on the three-term recurrence.
Reference legendre_reference(int count) {
  static std::mutex mutex;
  static std::map<int, Reference> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(count); it != cache.end()) return it->second;

  Reference ref;
  ref.nodes.resize(static_cast<std::size_t>(count));
  ref.weights.resize(static_cast<std::size_t>(count));
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = 1.0, p1 = x;
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node for the weight
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= count; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = count * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    ref.nodes[static_cast<std::size_t>(i)] = -x;
    ref.nodes[static_cast<std::size_t>(count - 1 - i)] = x;
    ref.weights[static_cast<std::size_t>(i)] = w;
    ref.weights[static_cast<std::size_t>(count - 1 - i)] = w;
  }
  if (count % 2 == 1) ref.nodes[static_cast<std::size_t>(count / 2)] = 0.0;
  cache.emplace(count, ref);
  return ref;
}

// Gauss-Jacobi nodes for (1+t)^beta on [-1, 1] by Golub-Welsch.
Reference jacobi_reference(int count, double beta) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, Reference> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find({count, beta}); it != cache.end()) return it->second;

  const auto n = static_cast<Eigen::Index>(count);
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 1));
  // alpha = 0 throughout
  for (int k = 0; k < count; ++k) {
    const double s = 2.0 * k + beta;
    diag(k) = (k == 0) ? beta / (beta + 2.0) : (beta * beta) / (s * (s + 2.0));
  }
  for (int k = 1; k < count; ++k) {
    const double s = 2.0 * k + beta;
    sub(k - 1) = 2.0 * k * (k + beta) / (s * std::sqrt((s + 1.0) * (s - 1.0)));
  }
  const double mu0 = std::pow(2.0, 1.0 + beta) / (1.0 + beta);

  Reference ref;
  if (count == 1) {
    ref.nodes = {diag(0)};
    ref.weights = {mu0};
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();
    for (Eigen::Index k = 0; k < n; ++k) {
      ref.nodes.push_back(values(k));
      ref.weights.push_back(mu0 * vectors(0, k) * vectors(0, k));
    }
  }
  cache.emplace(std::pair{count, beta}, ref);
  return ref;
}

void check_interval(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("quadrature interval must satisfy lo < hi");
}

}  // namespace

double QuadratureRule::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

QuadratureRule gauss_legendre(int count, double lo, double hi) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: count must be >= 1");
  check_interval(lo, hi);
  const Reference ref = legendre_reference(count);
  QuadratureRule rule;
  rule.lo = lo;
  rule.hi = hi;
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  rule.nodes.reserve(ref.nodes.size());
  rule.weights.reserve(ref.nodes.size());
  for (std::size_t k = 0; k < ref.nodes.size(); ++k) {
    rule.nodes.push_back(mid + half * ref.nodes[k]);
    rule.weights.push_back(half * ref.weights[k]);
  }
  return rule;
}

QuadratureRule gauss_jacobi_half(int count, double a, double Y) {
  if (count < 1) throw std::invalid_argument("gauss_jacobi_half: count must be >= 1");
  if (!(a > -1.0 && a < 1.0))
    throw std::invalid_argument("gauss_jacobi_half: exponent a must lie in (-1, 1)");
  if (!(Y > 0.0)) throw std::invalid_argument("gauss_jacobi_half: Y must be positive");
  const Reference ref = jacobi_reference(count, a);
  QuadratureRule rule;
  rule.lo = 0.0;
  rule.hi = Y;
  rule.weight_kind = WeightKind::even_power;
  rule.exponent = a;
  const double scale = std::pow(0.5 * Y, 1.0 + a);
  for (std::size_t k = 0; k < ref.nodes.size(); ++k) {
    rule.nodes.push_back(0.5 * Y * (1.0 + ref.nodes[k]));
    rule.weights.push_back(scale * ref.weights[k]);
  }
  return rule;
}

QuadratureRule gauss_even_weight(int count, double a, double Y) {
  if (!(a > -1.0 && a < 1.0))
    throw std::invalid_argument("gauss_even_weight: exponent a must lie in (-1, 1)");
  const QuadratureRule half = gauss_jacobi_half(count, a, Y);
  QuadratureRule rule;
  rule.lo = -Y;
  rule.hi = Y;
  rule.weight_kind = WeightKind::even_power;
  rule.exponent = a;
  const std::size_t m = half.size();
  rule.nodes.resize(2 * m);
  rule.weights.resize(2 * m);
  for (std::size_t k = 0; k < m; ++k) {
    rule.nodes[m - 1 - k] = -half.nodes[k];
    rule.weights[m - 1 - k] = half.weights[k];
    rule.nodes[m + k] = half.nodes[k];
    rule.weights[m + k] = half.weights[k];
  }
  return rule;
}

void append_panel(std::vector<double>& nodes, std::vector<double>& weights, double lo,
                  double hi, int count, Grading grading) {
  const Reference ref = legendre_reference(count);
  const double len = hi - lo;
  for (std::size_t k = 0; k < ref.nodes.size(); ++k) {
    const double u = 0.5 * (1.0 + ref.nodes[k]);
    const double wu = 0.5 * ref.weights[k];
    double t = u;
    double dt = 1.0;
    switch (grading) {
      case Grading::none:
        break;
      case Grading::toward_lo:
        t = u * u * u;
        dt = 3.0 * u * u;
        break;
      case Grading::toward_hi: {
        const double v = 1.0 - u;
        t = 1.0 - v * v * v;
        dt = 3.0 * v * v;
        break;
      }
      case Grading::both:
        t = u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
        dt = 30.0 * u * u * (1.0 - u) * (1.0 - u);
        break;
    }
    nodes.push_back(lo + len * t);
    weights.push_back(len * dt * wu);
  }
}

QuadratureRule composite_legendre(std::span<const double> breakpoints, int count_per_panel) {
  if (breakpoints.size() < 2)
    throw std::invalid_argument("composite_legendre: need at least two breakpoints");
  QuadratureRule rule;
  rule.lo = breakpoints.front();
  rule.hi = breakpoints.back();
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    check_interval(breakpoints[i], breakpoints[i + 1]);
    append_panel(rule.nodes, rule.weights, breakpoints[i], breakpoints[i + 1], count_per_panel);
  }
  return rule;
}

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod(const std::function<double(double)>& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(mid);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[static_cast<std::size_t>(j)];
    const double fsum = f(mid - dx) + f(mid + dx);
    kronrod += kKronrodWeights[static_cast<std::size_t>(j)] * fsum;
    if (j % 2 == 1) gauss += kGaussWeights[static_cast<std::size_t>(j / 2)] * fsum;
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f,
                                  std::span<const double> breakpoints, double abs_tol,
                                  double rel_tol, int max_intervals) {
  if (breakpoints.size() < 2)
    throw std::invalid_argument("integrate_adaptive: need at least two breakpoints");
  std::priority_queue<Segment> heap;
  AdaptiveResult result;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) continue;
    heap.push(kronrod(f, breakpoints[i], breakpoints[i + 1]));
    result.evaluations += 15;
  }
  auto totals = [&heap]() {
    // sum over a copy keeps the heap intact; segment counts stay small
    auto copy = heap;
    double v = 0.0;
    double e = 0.0;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      copy.pop();
    }
    return std::pair{v, e};
  };
  auto [value, error] = totals();
  while (error > std::max(abs_tol, rel_tol * std::abs(value)) &&
         static_cast<int>(heap.size()) < max_intervals) {
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Segment left = kronrod(f, worst.lo, mid);
    const Segment right = kronrod(f, mid, worst.hi);
    result.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (static_cast<int>(heap.size()) % 64 == 0) std::tie(value, error) = totals();
  }
  std::tie(value, error) = totals();
  result.value = value;
  result.error = error;
  return result;
}

double integrate_ball_weighted(const std::function<double(const ExtPoint&)>& g,
                               const ExtPoint& center, double radius, double a,
                               int resolution) {
  const int n = center.x.n;
  if (n != 1 && n != 2) throw std::invalid_argument("integrate_ball_weighted: n must be 1 or 2");
  if (center.y != 0.0)
    throw std::invalid_argument("integrate_ball_weighted: center must lie on y = 0");
  if (!(radius > 0.0)) throw std::invalid_argument("integrate_ball_weighted: radius must be positive");
  if (resolution < 2) throw std::invalid_argument("integrate_ball_weighted: resolution must be >= 2");

  const double half_pi = 0.5 * std::numbers::pi;
  // y = R sin(theta); |y|^a dy = R^{1+a} |theta|^a (sin theta / theta)^a cos theta dtheta
  const QuadratureRule outer = gauss_even_weight((resolution + 1) / 2, a, half_pi);
  const QuadratureRule inner = gauss_legendre(resolution, -half_pi, half_pi);
  const double scale = std::pow(radius, 1.0 + a);

  auto sample = [&](const ExtPoint& p) {
    const double v = g(p);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "integrate_ball_weighted: non-finite integrand at (" << p.x[0];
      if (n == 2) msg << ", " << p.x[1];
      msg << "; y=" << p.y << ")";
      throw EvaluationError(msg.str());
    }
    return v;
  };

  double total = 0.0;
  for (std::size_t i = 0; i < outer.size(); ++i) {
    const double theta = outer.nodes[i];
    const double sin_ratio = theta == 0.0 ? 1.0 : std::sin(theta) / theta;
    const double wy = outer.weights[i] * scale * std::pow(sin_ratio, a) * std::cos(theta);
    const double y = radius * std::sin(theta);
    const double width = radius * std::cos(theta);  // slice radius
    double slice = 0.0;
    for (std::size_t j = 0; j < inner.size(); ++j) {
      const double chi = inner.nodes[j];
      const double z1 = width * std::sin(chi);
      const double w1 = inner.weights[j] * width * std::cos(chi);
      if (n == 1) {
        ExtPoint p{Point(center.x[0] + z1), y};
        slice += w1 * sample(p);
      } else {
        const double width2 = width * std::cos(chi);
        double row = 0.0;
        for (std::size_t k = 0; k < inner.size(); ++k) {
          const double chi2 = inner.nodes[k];
          const double w2 = inner.weights[k] * width2 * std::cos(chi2);
          ExtPoint p{Point(center.x[0] + z1, center.x[1] + width2 * std::sin(chi2)), y};
          row += w2 * sample(p);
        }
        slice += w1 * row;
      }
    }
    total += wy * slice;
  }
  return total;
}

}  // namespace fracmv
