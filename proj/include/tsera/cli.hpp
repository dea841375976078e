#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tsera/config.hpp"
#include "tsera/harness.hpp"

namespace tsera {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitNumerical = 3 };

/// Entry point behind the `tsera` tool. `args` excludes the program name.
/// Subcommands: simulate, test, bench, sera.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Results table written by `bench`. Seconds are NA unless `timing` is set,
/// so identical configs give byte-identical files.
std::string render_results_csv(const ExperimentConfig& cfg, const ExperimentResult& result,
                               bool timing);

}  // namespace tsera
