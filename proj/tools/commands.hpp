#pragma once

#include <functional>
#include <ostream>

#include "config.hpp"

namespace fracmv::cli {

/// Each command prints a human-readable summary to `out`, writes its CSV
/// report under config.out_dir and returns an ExitCode. Errors are thrown and
/// mapped to exit codes by `guarded`.
int cmd_kernel_build(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_mvp(const RunConfig& config, std::ostream& out);
int cmd_extension_check(const RunConfig& config, std::ostream& out);
int cmd_regularity(const RunConfig& config, std::ostream& out);

/// Runs `body`; exceptions print to `err` and become exit codes.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace fracmv::cli
