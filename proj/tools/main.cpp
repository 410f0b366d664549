#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace fracmv::cli;

namespace {

struct Flags {
  std::optional<int> n;
  std::optional<double> s;
  std::optional<double> a;
  std::string config;
  std::string table;
  std::string out;
  std::vector<std::string> tol;
  std::string fields;
  std::optional<long long> seed;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--n", f.n, "dimension (1 or 2)");
  auto* s = cmd->add_option("--s", f.s, "fractional order in (0,1)");
  auto* a = cmd->add_option("--a", f.a, "extension exponent in (-1,1)");
  s->excludes(a);
  cmd->add_option("--config", f.config, "key=value config file");
  cmd->add_option("--table", f.table, "kernel table path");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--tol", f.tol, "tolerance override NAME=VALUE (repeatable)");
  cmd->add_option("--fields", f.fields, "comma-separated field list");
  cmd->add_option("--seed", f.seed, "random seed");
}

RunConfig resolve(const Flags& f) {
  RunConfig config;
  if (!f.config.empty()) apply_config_file(config, f.config);
  if (f.n) set_key(config, "n", std::to_string(*f.n));
  if (f.s || f.a) {
    config.a.reset();
    config.s.reset();
  }
  if (f.s) config.s = *f.s;
  if (f.a) config.a = *f.a;
  if (!f.table.empty()) set_key(config, "table", f.table);
  if (!f.out.empty()) set_key(config, "out", f.out);
  for (const std::string& item : f.tol) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--tol expects NAME=VALUE, got '" + item + "'");
    set_key(config, "tol." + item.substr(0, eq), item.substr(eq + 1));
  }
  if (!f.fields.empty()) set_key(config, "fields", f.fields);
  if (f.seed) set_key(config, "seed", std::to_string(*f.seed));
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal mean value kernels for the fractional Laplacian"};
  app.require_subcommand(1);
  Flags flags;
  int (*command)(const RunConfig&, std::ostream&) = nullptr;

  auto* kernel = app.add_subcommand("kernel", "build or verify a kernel table");
  kernel->require_subcommand(1);
  auto* build = kernel->add_subcommand("build", "tabulate Phi and Phi' and write the table");
  auto* verify = kernel->add_subcommand("verify", "run the kernel property suite on a table");
  auto* mvp = app.add_subcommand("mvp", "check f(x) = (Phi_r * f)(x) on s-harmonic fields");
  auto* extension = app.add_subcommand("extension", "check the weighted ball mean of the extension");
  auto* regularity = app.add_subcommand("regularity", "gradient bounds and weighted-norm ratios");
  for (auto* cmd : {build, verify, mvp, extension, regularity}) add_common(cmd, flags);
  build->callback([&] { command = cmd_kernel_build; });
  verify->callback([&] { command = cmd_verify; });
  mvp->callback([&] { command = cmd_mvp; });
  extension->callback([&] { command = cmd_extension_check; });
  regularity->callback([&] { command = cmd_regularity; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInvalidArguments;
  }
  return guarded([&] { return command(resolve(flags), std::cout); }, std::cerr);
}
