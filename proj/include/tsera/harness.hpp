#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsera/pipeline.hpp"
#include "tsera/simgen.hpp"

namespace tsera {

struct Evaluation {
  double fdp = 0.0;
  std::optional<double> power;  // empty when there are no true signals
  Index rejections = 0;
  Index false_rejections = 0;
  Index signals = 0;
};

Evaluation evaluate(const std::vector<bool>& reject, const GroundTruth& truth);

enum class Method { TSera, TBh, TSeraOracle, TBhOracle };

Method parse_method(std::string_view name);  // tsera | tbh | tsera_oracle | tbh_oracle
std::string method_name(Method m);

/// Nuisance-mode setting: structure for group 1 and group 2 on every nuisance
/// mode. "ar" is ar4/ar5, "ma" is ma3/ma4.
struct NuisanceDesign {
  StructureModel first;
  StructureModel second;

  static NuisanceDesign parse(std::string_view text);
  std::string name() const;
  bool operator==(const NuisanceDesign&) const = default;
};

struct ExperimentConfig {
  Tensor::Shape shape{50, 10, 5};
  Index n1 = 3;
  Index n2 = 3;
  Index k_star = 0;
  Scenario scenario = Scenario::Correlation;
  ModeDesign design = ModeDesign::parse("band/hub");
  NuisanceDesign nuisance = NuisanceDesign::parse("ar");
  std::vector<Method> methods{Method::TSera, Method::TBh, Method::TSeraOracle};
  Index replications = 100;
  double alpha = 0.05;
  std::uint64_t seed = 20240501;
  SeraConfig sera;  // alpha here is overwritten by `alpha`
  LambdaRule lambda{LambdaRule::Kind::Tuned, 0.0};
  double mean_scale1 = 3.0;
  double mean_scale2 = 2.0;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Everything one replication draws: per-group mode-k* targets (covariance,
/// or precision under pcorr), nuisance covariances, the truth mask and the
/// samples.
struct SimulatedData {
  std::vector<Matrix> sigmas1;  // one per mode, covariances
  std::vector<Matrix> sigmas2;
  Matrix target1;               // covariance (corr) or precision (pcorr) of mode k*
  Matrix target2;
  GroundTruth truth;
  std::vector<Tensor> group1;
  std::vector<Tensor> group2;

  /// True covariances of every mode except k*.
  std::vector<Matrix> nuisances(int group, Index k_star) const;
};

SimulatedData simulate(const ExperimentConfig& cfg, Rng& rng);

struct ReplicationRecord {
  Index index = 0;
  std::uint64_t seed = 0;
  std::vector<Evaluation> evaluations;  // aligned with cfg.methods
  std::vector<double> seconds;
};

struct FailedReplication {
  Index index = 0;
  std::uint64_t seed = 0;
  std::string message;
};

struct MethodSummary {
  Method method{};
  Index replications = 0;  // successful ones
  double fdr = 0.0;
  double fdr_se = 0.0;
  std::optional<double> power;
  std::optional<double> power_se;
  double mean_rejections = 0.0;
  double seconds = 0.0;
};

struct ExperimentResult {
  std::vector<MethodSummary> summaries;
  std::vector<ReplicationRecord> records;  // successful replications, by index
  std::vector<FailedReplication> failures;
};

/// Runs one replication: seed = stream_seed(cfg.seed, index).
ReplicationRecord run_replication(const ExperimentConfig& cfg, Index index);

/// All replications, possibly in parallel; aggregation is ordered by
/// replication index so the output does not depend on scheduling. Throws
/// NumericalError when more than 5% of the replications fail.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace tsera
