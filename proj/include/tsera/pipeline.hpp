#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsera/pcorr.hpp"
#include "tsera/sera.hpp"
#include "tsera/stats.hpp"
#include "tsera/transform.hpp"

namespace tsera {

enum class Scenario { Correlation, PartialCorrelation };

Scenario parse_scenario(std::string_view name);  // "corr" | "pcorr"
std::string scenario_name(Scenario s);

struct PipelineOptions {
  Scenario scenario = Scenario::Correlation;
  Index k_star = 0;
  SeraConfig sera;
  LambdaRule lambda{LambdaRule::Kind::Tuned, 0.0};
  /// Known nuisance covariances per group (K-1 matrices, increasing mode
  /// order, k* skipped); estimated from the data when empty.
  std::optional<std::vector<Matrix>> nuisances1;
  std::optional<std::vector<Matrix>> nuisances2;
};

struct PipelineResult {
  GroupEstimates group1;
  GroupEstimates group2;
  StatField stats;
  DecisionSet sera;
  DecisionSet bh;
  bool clamp_warning = false;
  std::optional<double> tuned_c;  // set when the penalty was tuned
};

/// Transform both groups, build the statistic pairs for the chosen scenario,
/// then decide with SERA and with plain BH on the same p-values.
PipelineResult run_pipeline(const std::vector<Tensor>& group1, const std::vector<Tensor>& group2,
                            const PipelineOptions& options);

/// Per-group estimates for one transformed group under a scenario.
GroupEstimates group_estimates(const TransformedGroup& tg, Scenario scenario,
                               const LambdaRule& lambda);

}  // namespace tsera
