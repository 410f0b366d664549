#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ios>
#include <limits>
#include <memory>

#include "fracmv/extension.hpp"
#include "fracmv/fraclap.hpp"
#include "fracmv/profile.hpp"

namespace fracmv::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v, const char* pattern = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

class CsvWriter {
 public:
  CsvWriter(const std::string& dir, const std::string& name, const std::string& header) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    path_ = dir + "/" + name;
    file_.open(path_, std::ios::trunc);
    if (!file_) throw IoError("cannot open '" + path_ + "' for writing");
    line(header);
  }
  void line(const std::string& text) {
    file_ << text << '\n';
    if (!file_) throw IoError("write to '" + path_ + "' failed");
  }
  void row(const ReportRow& r) { line(csv_line(r)); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream file_;
};

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

RadialKernelTable load_checked(const std::string& path) {
  try {
    return load_table(path);
  } catch (const std::ios_base::failure& e) {
    throw IoError(e.what());
  } catch (const std::exception& e) {
    throw IoError("cannot parse kernel table '" + path + "': " + e.what());
  }
}

void check_params(const RunConfig& config, const Params& table) {
  if (config.n && *config.n != table.n())
    throw MismatchError("table has n=" + std::to_string(table.n()) + " but n=" +
                        std::to_string(*config.n) + " was requested");
  const bool order_given = config.a || config.s;
  if (!order_given) return;
  if (config.a && config.s) throw ConfigError("give exactly one of a or s, not both");
  const double a = config.a ? *config.a : 1.0 - 2.0 * *config.s;
  if (std::abs(a - table.a()) > 1e-12)
    throw MismatchError("table has a=" + num(table.a(), "%.17g") + " but a=" + num(a, "%.17g") +
                        " was requested");
}

// The table named by --table (must exist), else the default path when present,
// else a fresh in-memory build.
RadialKernelTable obtain_table(const RunConfig& config, std::ostream& out) {
  if (!config.table_path.empty()) {
    RadialKernelTable t = load_checked(config.table_path);
    check_params(config, t.params());
    return t;
  }
  const std::string path = config.resolved_table_path();
  if (std::filesystem::exists(path)) {
    RadialKernelTable t = load_checked(path);
    check_params(config, t.params());
    out << "using kernel table " << path << '\n';
    return t;
  }
  out << "no kernel table at " << path << "; building in memory\n";
  BuildOptions options;
  options.grid = config.grid;
  options.threads = config.threads;
  return build_table(config.params(), options);
}

struct NamedField {
  std::string id;
  ScalarField field;
  std::string tolerance;
};

std::vector<std::string> field_list(const RunConfig& config, std::vector<std::string> defaults) {
  return config.fields.empty() ? defaults : config.fields;
}

// Fields that are s-harmonic on the domain. `seeds` ball-Poisson samples are
// drawn starting at config.seed, on the origin ball of radius `harmonic_radius`.
std::vector<NamedField> make_fields(const RunConfig& config, const Params& params,
                                    const std::vector<std::string>& keys, double harmonic_radius,
                                    int seeds) {
  const int n = params.n();
  std::vector<NamedField> out;
  for (const std::string& key : keys) {
    if (key == "constant") {
      out.push_back({key, constant_field(n), "mvp.constant"});
    } else if (key == "affine") {
      if (!(params.s() > 0.5))
        throw ConfigError("field 'affine' needs s > 1/2 (growth class), got s=" + num(params.s()));
      out.push_back({key, make_field("affine", params, config.seed), "mvp.affine"});
    } else if (key == "ball_poisson") {
      for (int k = 0; k < seeds; ++k) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(k);
        out.push_back({"ball_poisson#" + std::to_string(seed),
                       ball_poisson_field(n, params.s(), seed, harmonic_radius), "mvp.sharmonic"});
      }
    } else if (key == "riesz") {
      out.push_back({key, riesz_field(n, params.s(), Point::on_axis(n, 1.6 * harmonic_radius)),
                     "mvp.sharmonic"});
    } else {
      throw ConfigError("field '" + key +
                        "' is not available here; choose from constant, affine, ball_poisson, riesz");
    }
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidArguments;
  } catch (const MismatchError& e) {
    err << "error: " << e.what() << '\n';
    return kMismatch;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidArguments;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kToleranceFailure;
  }
}

int cmd_kernel_build(const RunConfig& config, std::ostream& out) {
  const Params params = config.params();
  BuildOptions options;
  options.grid = config.grid;
  options.threads = config.threads;
  const auto t0 = std::chrono::steady_clock::now();
  const RadialKernelTable table = build_table(params, options);
  const double elapsed = seconds_since(t0);
  const std::string path = config.resolved_table_path();
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw IoError("cannot create '" + parent.string() + "': " + ec.message());
  }
  save_table(path, table);
  const double residual = std::abs(table.mass() - 1.0);
  out << "kernel n=" << params.n() << " a=" << num(params.a(), "%.17g")
      << " s=" << num(params.s(), "%.17g") << '\n'
      << "grid: " << table.grid().describe() << '\n'
      << "built with: " << table.built_with() << '\n'
      << "mass residual: " << num(residual) << '\n'
      << "build time: " << num(elapsed, "%.2f") << " s\n"
      << "wrote " << path << '\n';
  return residual <= 1e-4 ? kPass : kToleranceFailure;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
  const std::string path = config.resolved_table_path();
  const RadialKernelTable table = load_checked(path);
  check_params(config, table.params());
  const PropertyReport report = verify_kernel_properties(table);
  CsvWriter csv(config.out_dir, "verify.csv", "property,description,measured,threshold,passed,detail");
  out << "kernel properties for n=" << table.params().n() << " a=" << num(table.params().a(), "%.17g")
      << " (" << path << ")\n";
  for (const PropertyCheck& c : report.checks) {
    csv.line(c.id + "," + csv_quote(c.description) + "," + num(c.measured, "%.17g") + "," +
             num(c.threshold, "%.17g") + "," + (c.passed ? "true" : "false") + "," +
             csv_quote(c.detail));
    out << "  (" << c.id << ") " << verdict(c.passed) << "  " << c.description << ": " << c.detail
        << '\n';
  }
  out << (report.all_passed() ? "all properties hold" : "some properties FAILED") << "; report "
      << csv.path() << '\n';
  return report.all_passed() ? kPass : kToleranceFailure;
}

int cmd_mvp(const RunConfig& config, std::ostream& out) {
  const RadialKernelTable table = obtain_table(config, out);
  const Params params = table.params();
  RunConfig effective = config;
  effective.n = params.n();
  effective.a = params.a();
  effective.s.reset();
  const Domain domain = effective.make_domain();
  std::vector<std::string> defaults{"constant"};
  if (params.s() > 0.5) defaults.push_back("affine");
  defaults.push_back("ball_poisson");
  const auto fields = make_fields(config, params, field_list(config, defaults), domain.extent(), 3);
  const std::vector<Point> points = domain.interior_points(5, config.seed);
  ConvolutionOptions conv;
  conv.tol = config.tol("conv");

  CsvWriter csv(config.out_dir, "mvp.csv", csv_header());
  bool all_ok = true;
  out << "mean value check on " << domain.describe() << ", " << points.size()
      << " points, r in {delta/4, delta/2}\n";
  for (const NamedField& nf : fields) {
    const double tol = config.tol(nf.tolerance);
    double worst = 0.0;
    for (const Point& x : points) {
      const double delta = domain.distance_to_boundary(x);
      const double fx = nf.field(x);
      for (double r : {0.25 * delta, 0.5 * delta}) {
        const double residual = std::abs(fx - phi_r_convolve(table, nf.field, x, r, conv).value);
        worst = std::max(worst, residual / (1.0 + std::abs(fx)));
        csv.row({nf.id, format_point(x), r, kNaN, kNaN, residual, "mvp_residual"});
      }
    }
    const bool ok = worst <= tol;
    all_ok = all_ok && ok;
    out << "  " << verdict(ok) << "  " << nf.id << ": max |f - Phi_r*f|/(1+|f|) = " << num(worst)
        << " (tol " << num(tol) << ")\n";
  }
  out << "report " << csv.path() << '\n';
  return all_ok ? kPass : kToleranceFailure;
}

int cmd_extension_check(const RunConfig& config, std::ostream& out) {
  const Params params = config.params();
  const int n = params.n();
  const Domain domain = config.make_domain();
  const BumpProfile profile = normalize(n, params.a());
  const ExtensionKernel kernel(params);
  std::vector<std::string> defaults{"constant", "riesz"};
  if (n == 1) defaults.push_back("ball_poisson");
  const auto fields = make_fields(config, params, field_list(config, defaults), domain.extent(), 1);
  const std::vector<Point> points = domain.interior_points(3, config.seed);

  std::unique_ptr<RadialKernelTable> table;
  const bool have_table = !config.table_path.empty() ||
                          std::filesystem::exists(config.resolved_table_path());
  if (have_table) table = std::make_unique<RadialKernelTable>(obtain_table(config, out));
  ConvolutionOptions conv;
  conv.tol = config.tol("conv");

  CsvWriter csv(config.out_dir, "extension.csv", csv_header());
  bool all_ok = true;
  out << "extension mean value check on " << domain.describe() << ", " << points.size()
      << " points, r in {0.1, 0.2, 0.4} delta\n";
  for (const NamedField& nf : fields) {
    std::function<double(const ExtPoint&)> v;
    int resolution = 192;
    if (nf.id == "constant") {
      v = [](const ExtPoint&) { return 1.0; };
    } else if (nf.field.closed_form_extension) {
      v = [&nf](const ExtPoint& X) { return nf.field.closed_form_extension(X.x, X.y); };
    } else {
      if (n != 1)
        throw ConfigError("field '" + nf.id +
                          "' has no closed-form extension; extend()-based checks run in n = 1 only");
      v = [&](const ExtPoint& X) { return extend(kernel, nf.field, X.x, X.y, conv.tol).value; };
      resolution = 96;
    }
    const double value_tol = config.tol(nf.id == "constant" ? "ext.unit" : "ext.value");
    const double spread_tol = config.tol("ext.spread");
    double worst_value = 0.0;
    double worst_spread = 0.0;
    double worst_mvp = 0.0;
    for (const Point& x : points) {
      const double delta = domain.distance_to_boundary(x);
      const double fx = nf.field(x);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (double c : {0.1, 0.2, 0.4}) {
        const double r = c * delta;
        const double mean = extension_mean_value(profile, v, x, r, resolution);
        lo = std::min(lo, mean);
        hi = std::max(hi, mean);
        worst_value = std::max(worst_value, std::abs(mean - fx));
        csv.row({nf.id, format_point(x), r, kNaN, kNaN, mean, "ext_mean_value"});
        csv.row({nf.id, format_point(x), r, kNaN, kNaN, std::abs(mean - fx), "ext_residual"});
        if (table) {
          const double d = std::abs(mean - phi_r_convolve(*table, nf.field, x, r, conv).value);
          worst_mvp = std::max(worst_mvp, d);
          csv.row({nf.id, format_point(x), r, kNaN, kNaN, d, "ext_vs_mvp"});
        }
      }
      worst_spread = std::max(worst_spread, hi - lo);
      csv.row({nf.id, format_point(x), kNaN, kNaN, kNaN, hi - lo, "ext_spread"});
    }
    bool ok = worst_value <= value_tol && worst_spread <= spread_tol;
    std::string extra;
    if (table) {
      const double combined = config.tol("ext.value") + config.tol(nf.tolerance);
      ok = ok && worst_mvp <= combined;
      extra = ", vs Phi_r*f " + num(worst_mvp) + " (tol " + num(combined) + ")";
    }
    all_ok = all_ok && ok;
    out << "  " << verdict(ok) << "  " << nf.id << ": |mean - f(x)| " << num(worst_value) << " (tol "
        << num(value_tol) << "), spread " << num(worst_spread) << " (tol " << num(spread_tol) << ")"
        << extra << '\n';
  }
  out << "report " << csv.path() << '\n';
  return all_ok ? kPass : kToleranceFailure;
}

int cmd_regularity(const RunConfig& config, std::ostream& out) {
  const RadialKernelTable table = obtain_table(config, out);
  const Params params = table.params();
  const int n = params.n();
  RunConfig effective = config;
  effective.n = n;
  effective.a = params.a();
  effective.s.reset();
  const Domain domain = effective.make_domain();
  const std::vector<std::string> keys = field_list(config, {"ball_poisson"});
  const std::vector<double> lambdas{0.3, 0.5};
  const std::vector<double> factors{0.5, 0.25, 0.125};
  const double band = config.tol("lemma33.band");

  CsvWriter csv(config.out_dir, "regularity.csv", csv_header());
  bool all_ok = true;

  // pointwise gradient bound
  const auto fields33 = make_fields(config, params, keys, domain.extent(), 5);
  const std::vector<Point> grid = domain.interior_points(n == 1 ? 5 : 3, config.seed);
  BallFamily family;
  if (n == 2) family.resolution = 16;
  out << "pointwise gradient bound on " << domain.describe() << ", " << grid.size()
      << " points, r = {1/2, 1/4, 1/8} delta\n";
  for (const NamedField& nf : fields33) {
    const auto reports = lemma33_ratio(table, nf.field, domain, lambdas, grid, factors, family);
    for (const Lemma33Report& rep : reports) {
      for (const Lemma33Sample& s : rep.samples) {
        const std::string x = format_point(s.x);
        csv.row({nf.id, x, s.r, rep.lambda, kNaN, s.ratio, "lemma33_ratio"});
        csv.row({nf.id, x, s.r, rep.lambda, kNaN, s.gradient_norm, "lemma33_gradient"});
        csv.row({nf.id, x, s.r, rep.lambda, kNaN, s.sharp, "lemma33_sharp"});
      }
      const double coarse = rep.max_ratio(0.5);
      const double fine = rep.max_ratio(0.125);
      const bool ok = !rep.violation && std::isfinite(fine) && fine <= band * coarse;
      all_ok = all_ok && ok;
      out << "  " << verdict(ok) << "  " << nf.id << " lambda=" << rep.lambda << ": max ratio "
          << num(fine) << " at r = delta/8 vs " << num(coarse) << " at delta/2 (band " << band
          << "x), median " << num(rep.median_ratio(0.5)) << (rep.violation ? ", VIOLATION" : "")
          << '\n';
    }
  }

  // weighted gradient norm against the Besov norm
  if (n != 1) {
    out << "weighted-norm ratio: runs in n = 1 only (a 2-D grid of gradient convolutions is out of "
           "budget); skipped\n";
  } else {
    const double lambda = 0.5;
    const double p = 2.0;
    const auto fields32 = make_fields(config, params, keys, 1.25 * domain.extent(), 5);
    std::vector<double> ratios;
    out << "weighted-norm ratio, lambda=" << lambda << " p=" << p << '\n';
    bool ok32 = true;
    for (const NamedField& nf : fields32) {
      BesovWindow window;
      window.W = (nf.field.support ? nf.field.support->radius : 4.0 * domain.extent()) + window.h_max;
      const Lemma32Result base = lemma32_ratio(table, nf.field, domain, lambda, p, 16, window);
      const Lemma32Result fine = lemma32_ratio(table, nf.field, domain, lambda, p, 32, window);
      const double change = base.ratio > 0.0 ? std::abs(fine.ratio - base.ratio) / base.ratio : 0.0;
      csv.row({nf.id, "", kNaN, lambda, p, base.ratio, "lemma32_ratio"});
      csv.row({nf.id, "", kNaN, lambda, p, fine.ratio, "lemma32_ratio_refined"});
      csv.row({nf.id, "", kNaN, lambda, p, base.besov, "besov_seminorm"});
      const bool ok = std::isfinite(base.ratio) && !base.besov_divergent &&
                      change <= config.tol("lemma32.refine");
      ok32 = ok32 && ok;
      if (base.ratio > 0.0) ratios.push_back(base.ratio);
      out << "  " << verdict(ok) << "  " << nf.id << ": ratio " << num(base.ratio, "%.5g")
          << ", refined " << num(fine.ratio, "%.5g") << " (change " << num(change) << ")\n";
    }
    if (!ratios.empty()) {
      const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
      const double spread = *mx / *mn;
      const bool ok = spread <= config.tol("lemma32.spread");
      ok32 = ok32 && ok;
      out << "  " << verdict(ok) << "  family max/min " << num(spread) << " (limit "
          << config.tol("lemma32.spread") << ")\n";
    }
    all_ok = all_ok && ok32;
  }
  out << "report " << csv.path() << '\n';
  return all_ok ? kPass : kToleranceFailure;
}

}  // namespace fracmv::cli
