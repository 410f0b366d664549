#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracmv/analysis.hpp"
#include "fracmv/mvkernel.hpp"
#include "fracmv/types.hpp"

namespace fracmv::cli {

enum ExitCode : int {
  kPass = 0,
  kToleranceFailure = 1,
  kInvalidArguments = 2,
  kMismatch = 3,
  kIoError = 4,
};

/// Bad key, value or combination in a config file or on the command line.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Table contents disagree with the requested parameters.
class MismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read, parsed or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Named tolerances and their defaults.
const std::map<std::string, double>& default_tolerances();

/// Everything a command needs. Either a or s is set, never both.
struct RunConfig {
  std::optional<int> n;
  std::optional<double> a;
  std::optional<double> s;
  GridSpec grid;
  std::map<std::string, double> tolerances = default_tolerances();
  std::vector<std::string> fields;
  std::string domain = "ball";
  std::string out_dir = ".";
  std::string table_path;
  std::uint64_t seed = 1;
  unsigned threads = 0;

  /// Validated parameters; throws ConfigError.
  Params params() const;
  double tol(const std::string& name) const;
  Domain make_domain() const;
  /// --table, or <out>/kernel_n<n>_a<a>.tbl.
  std::string resolved_table_path() const;
};

/// Sets one key. Keys: n, a, s, grid, tol.<name>, fields, domain, out, table,
/// seed, threads.
void set_key(RunConfig& config, const std::string& key, const std::string& value);

/// Flat key=value text, one key per line, `#` starts a comment.
void apply_config_text(RunConfig& config, const std::string& text, const std::string& origin = "config");
void apply_config_file(RunConfig& config, const std::string& path);

/// "ball", "ball:c1[,c2],r", "interval:lo,hi", "box:lo1,lo2,hi1,hi2",
/// "polygon:x1,y1,x2,y2,...".
Domain parse_domain(const std::string& text, int n);

}  // namespace fracmv::cli
