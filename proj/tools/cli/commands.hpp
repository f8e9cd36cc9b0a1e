#pragma once

#include <ostream>

#include "cli/config.hpp"

namespace bcp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitComputationError = 3;

/// Each command prints a "key: value" summary to `out` and, when config.out
/// is set, writes its CSV there. `surface` without config.out writes the CSV
/// to `out` instead of the summary.
void cmd_compute(const RunConfig& config, std::ostream& out);
void cmd_study(const RunConfig& config, std::ostream& out);
void cmd_surface(const RunConfig& config, std::ostream& out);
void cmd_mc(const RunConfig& config, std::ostream& out);
void cmd_bound(const RunConfig& config, std::ostream& out);

/// Full command line: bcp <command> [--config FILE] [--key value ...]
/// [--threads N] [--out FILE]. Returns the process exit code; failures are
/// reported on `err` with the module that raised them.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bcp::cli
