#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fracmv::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || !std::isfinite(v))
    throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size()) throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
  return v;
}

std::vector<double> numbers(const std::string& key, const std::string& list) {
  std::vector<double> out;
  for (const std::string& item : split(list, ',')) out.push_back(to_double(key, item));
  return out;
}

}  // namespace

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> defaults{
      {"conv", 1e-6},          {"mvp.constant", 2e-4},  {"mvp.affine", 1e-4},
      {"mvp.sharmonic", 5e-4}, {"ext.unit", 1e-8},      {"ext.value", 5e-4},
      {"ext.spread", 5e-4},    {"lemma33.band", 4.0},   {"lemma32.spread", 50.0},
      {"lemma32.refine", 0.1},
  };
  return defaults;
}

Params RunConfig::params() const {
  if (!n) throw ConfigError("missing dimension: give --n 1 or --n 2");
  if (a && s) throw ConfigError("give exactly one of a or s, not both");
  if (!a && !s) throw ConfigError("missing order: give --s (in (0,1)) or --a (in (-1,1))");
  try {
    return s ? Params::from_s(*n, *s) : Params::from_a(*n, *a);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

double RunConfig::tol(const std::string& name) const {
  const auto it = tolerances.find(name);
  if (it == tolerances.end()) throw ConfigError("unknown tolerance '" + name + "'");
  return it->second;
}

Domain RunConfig::make_domain() const { return parse_domain(domain, params().n()); }

std::string RunConfig::resolved_table_path() const {
  if (!table_path.empty()) return table_path;
  const Params p = params();
  char name[96];
  std::snprintf(name, sizeof name, "kernel_n%d_a%g.tbl", p.n(), p.a());
  return out_dir + "/" + name;
}

void set_key(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "n") {
    const long long n = to_integer(key, value);
    if (n != 1 && n != 2) throw ConfigError("n must be 1 or 2, got " + value);
    config.n = static_cast<int>(n);
  } else if (key == "a") {
    config.a = to_double(key, value);
  } else if (key == "s") {
    config.s = to_double(key, value);
  } else if (key == "grid") {
    try {
      config.grid = GridSpec::parse(value);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
  } else if (key.rfind("tol.", 0) == 0) {
    const std::string name = key.substr(4);
    if (!default_tolerances().contains(name)) throw ConfigError("unknown tolerance '" + name + "'");
    const double v = to_double(key, value);
    if (!(v > 0.0)) throw ConfigError("tolerance '" + name + "' must be positive");
    config.tolerances[name] = v;
  } else if (key == "fields") {
    config.fields = split(value, ',');
  } else if (key == "domain") {
    config.domain = value;
  } else if (key == "out") {
    config.out_dir = value;
  } else if (key == "table") {
    config.table_path = value;
  } else if (key == "seed") {
    const long long v = to_integer(key, value);
    if (v < 0) throw ConfigError("seed must be nonnegative");
    config.seed = static_cast<std::uint64_t>(v);
  } else if (key == "threads") {
    const long long v = to_integer(key, value);
    if (v < 0) throw ConfigError("threads must be nonnegative");
    config.threads = static_cast<unsigned>(v);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

void apply_config_text(RunConfig& config, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(number) + ": expected key=value");
    try {
      set_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  apply_config_text(config, text.str(), path);
}

Domain parse_domain(const std::string& text, int n) {
  const auto colon = text.find(':');
  const std::string kind = trim(text.substr(0, colon));
  const std::vector<double> v =
      colon == std::string::npos ? std::vector<double>{} : numbers("domain", text.substr(colon + 1));
  auto point = [&](std::size_t at) { return n == 1 ? Point(v[at]) : Point(v[at], v[at + 1]); };
  try {
    if (kind == "ball") {
      if (v.empty()) return Domain::ball(Point::zero(n), 1.0);
      if (v.size() != static_cast<std::size_t>(n) + 1) throw ConfigError("ball expects centre and radius");
      return Domain::ball(point(0), v.back());
    }
    if (kind == "interval") {
      if (n != 1 || v.size() != 2) throw ConfigError("interval expects lo,hi in one dimension");
      return Domain::interval(v[0], v[1]);
    }
    if (kind == "box") {
      if (v.size() != 2 * static_cast<std::size_t>(n)) throw ConfigError("box expects lo and hi corners");
      return Domain::box(point(0), point(static_cast<std::size_t>(n)));
    }
    if (kind == "polygon") {
      if (n != 2 || v.size() < 6 || v.size() % 2 != 0)
        throw ConfigError("polygon expects at least three planar vertices");
      std::vector<Point> vertices;
      for (std::size_t i = 0; i < v.size(); i += 2) vertices.push_back(Point(v[i], v[i + 1]));
      return Domain::polygon(std::move(vertices));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
  throw ConfigError("unknown domain kind '" + kind + "'");
}

}  // namespace fracmv::cli
