#include "fracmv/polar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fracmv {

namespace {

constexpr int kMinArcNodes = 12;

struct Break {
  double at;
  bool singular;
  bool ladder = false;
};

void sort_and_merge(std::vector<Break>& b, double tol) {
  std::sort(b.begin(), b.end(), [](const Break& l, const Break& r) { return l.at < r.at; });
  std::vector<Break> merged;
  for (const Break& br : b) {
    if (!merged.empty() && br.at - merged.back().at <= tol * std::max(1.0, std::abs(br.at))) {
      merged.back().singular = merged.back().singular || br.singular;
      merged.back().ladder = merged.back().ladder || br.ladder;
      continue;
    }
    merged.push_back(br);
  }
  b = std::move(merged);
}

Grading grading_for(bool lo_singular, bool hi_singular) {
  if (lo_singular && hi_singular) return Grading::both;
  if (lo_singular) return Grading::toward_lo;
  if (hi_singular) return Grading::toward_hi;
  return Grading::none;
}

// Geometric breakpoints toward breaks from point singularities, so that
// integrable blow-ups like |t|^{-1/2} are resolved panel by panel rather than
// by grading alone.
void add_ladders(std::vector<Break>& b) {
  constexpr int kLevels = 10;
  constexpr double kRatio = 4.0;
  std::vector<Break> extra;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!b[i].ladder) continue;
    if (i > 0) {
      const double gap = b[i].at - b[i - 1].at;
      for (int j = 1; j <= kLevels; ++j) extra.push_back({b[i].at - gap * std::pow(kRatio, -j), false});
    }
    if (i + 1 < b.size()) {
      const double gap = b[i + 1].at - b[i].at;
      for (int j = 1; j <= kLevels; ++j) extra.push_back({b[i].at + gap * std::pow(kRatio, -j), false});
    }
  }
  if (extra.empty()) return;
  b.insert(b.end(), extra.begin(), extra.end());
  sort_and_merge(b, 1e-15);
}

}  // namespace

double support_reach(const ScalarField& field, const Point& x) {
  if (!field.support) return std::numeric_limits<double>::infinity();
  return distance(x, field.support->center) + field.support->radius;
}

RadialRule plan_radial(const RadialLayout& layout, double cutoff, const ScalarField* field,
                       const Point& x) {
  if (!(cutoff > 0.0)) return {};
  std::vector<Break> br;
  const double core = layout.core_extent * layout.scale;
  for (int k = 0; k <= layout.core_panels; ++k) {
    const double at = core * k / layout.core_panels;
    if (at >= cutoff) break;
    br.push_back({at, false});
  }
  for (double at = core * layout.ratio; at < cutoff; at *= layout.ratio) br.push_back({at, false});
  br.push_back({cutoff, false});

  double structure_end = 0.0;
  if (field != nullptr) {
    for (const SingularSphere& sph : field->singular) {
      const double d = distance(x, sph.center);
      for (double at : {std::abs(d - sph.radius), d + sph.radius})
        if (at > 0.0 && at < cutoff) br.push_back({at, sph.graded, sph.graded && sph.radius == 0.0});
      if (sph.graded && d == sph.radius) br.push_back({0.0, true});
    }
    structure_end = x.norm() + field->structure_radius;
  }
  sort_and_merge(br, 1e-13);
  add_ladders(br);

  RadialRule rule;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double lo = br[i].at;
    const double hi = br[i + 1].at;
    if (i == 0 && layout.jacobi_first && lo == 0.0) {
      const QuadratureRule gj = gauss_jacobi_half(layout.nodes, layout.jacobi_exponent, hi);
      for (std::size_t k = 0; k < gj.size(); ++k) {
        rule.rho.push_back(gj.nodes[k]);
        rule.weight.push_back(gj.weights[k] / std::pow(gj.nodes[k], layout.jacobi_exponent));
      }
      continue;
    }
    // split wide panels inside the region where the field has structure
    int pieces = 1;
    if (field != nullptr && lo < structure_end)
      pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / field->feature_scale)));
    const double step = (hi - lo) / pieces;
    for (int p = 0; p < pieces; ++p) {
      const double a = lo + p * step;
      const double b = (p + 1 == pieces) ? hi : lo + (p + 1) * step;
      const bool lo_sing = (p == 0) && br[i].singular;
      const bool hi_sing = (p + 1 == pieces) && br[i + 1].singular;
      append_panel(rule.rho, rule.weight, a, b, layout.nodes, grading_for(lo_sing, hi_sing));
    }
  }
  return rule;
}

AngularRule angular_rule(const Point& x, double rho, const ScalarField* field, int base_nodes,
                         bool symmetric) {
  AngularRule rule;
  if (x.n == 1) {
    rule.direction = {Point(1.0), Point(-1.0)};
    rule.weight = {1.0, 1.0};
    return rule;
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<Break> cuts;
  auto add = [&](double angle, bool graded) {
    cuts.push_back({angle, graded});
    if (symmetric) cuts.push_back({angle + std::numbers::pi, graded});
  };
  if (field != nullptr) {
    for (const SingularSphere& sph : field->singular) {
      const Point rel = sph.center - x;
      const double d = rel.norm();
      if (d == 0.0) continue;  // concentric: the circle never crosses it transversally
      const double phi = std::atan2(rel[1], rel[0]);
      if (sph.radius == 0.0) {
        // point singularity: geometric cuts toward its direction
        add(phi, false);
        const double width = std::max(std::abs(rho - d) / std::max(rho, 1e-300), 1e-9);
        for (double w = width; w < 0.25 * std::numbers::pi; w *= 4.0) {
          add(phi + w, false);
          add(phi - w, false);
        }
        continue;
      }
      if (std::abs(rho - sph.radius) < d && d < rho + sph.radius) {
        const double c = std::clamp((rho * rho + d * d - sph.radius * sph.radius) / (2.0 * rho * d),
                                    -1.0, 1.0);
        const double delta = std::acos(c);
        add(phi + delta, sph.graded);
        add(phi - delta, sph.graded);
      }
    }
  }
  if (cuts.empty()) {
    const int m = base_nodes + (base_nodes % 2);
    for (int k = 0; k < m; ++k) {
      const double theta = two_pi * (k + 0.5) / m;
      rule.direction.push_back(Point(std::cos(theta), std::sin(theta)));
      rule.weight.push_back(two_pi / m);
    }
    return rule;
  }
  for (Break& c : cuts) c.at -= two_pi * std::floor(c.at / two_pi);
  sort_and_merge(cuts, 1e-13);
  if (cuts.size() > 1 && cuts.front().at + two_pi - cuts.back().at <= 1e-13) {
    cuts.front().singular = cuts.front().singular || cuts.back().singular;
    cuts.pop_back();
  }
  std::vector<double> theta;
  std::vector<double> weight;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const Break& lo = cuts[i];
    const Break& hi = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts.front();
    const double end = (i + 1 < cuts.size()) ? hi.at : hi.at + two_pi;
    const int count =
        std::max(kMinArcNodes, static_cast<int>(std::ceil(base_nodes * (end - lo.at) / two_pi)));
    append_panel(theta, weight, lo.at, end, count, grading_for(lo.singular, hi.singular));
  }
  rule.direction.reserve(theta.size());
  for (double t : theta) rule.direction.push_back(Point(std::cos(t), std::sin(t)));
  rule.weight = std::move(weight);
  return rule;
}

}  // namespace fracmv
