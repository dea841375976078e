#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tsera/harness.hpp"

namespace tsera {

// Experiment configuration, plain text:
//
//   [experiment]
//   scenario = corr            # corr | pcorr
//   design = band/hub          # <a>/<b> or split:<base>
//   nuisance = ar              # ar | ma | <a>/<b>
//   shape = 50 10 5
//   mode = 1                   # 1-based mode of interest
//   n1 = 3
//   ...
//   [sera]
//   screen_level = 0.9
//   kernel = gaussian
//   bandwidth = auto
//   trunc_xi = 1e-05
//
// '#' and ';' start comments. Unknown keys are rejected.

ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>");
std::string render_config(const ExperimentConfig& cfg);
ExperimentConfig read_config(const std::filesystem::path& path);

}  // namespace tsera
