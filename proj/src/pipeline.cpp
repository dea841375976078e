#include "tsera/pipeline.hpp"

#include "tsera/baseline.hpp"

namespace tsera {

Scenario parse_scenario(std::string_view name) {
  if (name == "corr") return Scenario::Correlation;
  if (name == "pcorr") return Scenario::PartialCorrelation;
  throw DomainError("unknown scenario '" + std::string(name) + "' (expected corr or pcorr)");
}

std::string scenario_name(Scenario s) {
  return s == Scenario::Correlation ? "corr" : "pcorr";
}

GroupEstimates group_estimates(const TransformedGroup& tg, Scenario scenario,
                               const LambdaRule& lambda) {
  const Matrix fibers = pooled_fibers(tg);
  if (scenario == Scenario::Correlation) return corr_estimates(fibers);
  return pcorr_estimates(nodewise_regress(fibers, lambda)).as_group_estimates();
}

PipelineResult run_pipeline(const std::vector<Tensor>& group1, const std::vector<Tensor>& group2,
                            const PipelineOptions& options) {
  options.sera.validate();
  if (group1.empty() || group2.empty()) throw DomainError("run_pipeline: empty group");
  if (group1.front().shape() != group2.front().shape()) {
    throw ShapeError("run_pipeline: the two groups have different tensor shapes");
  }
  TransformOptions t1, t2;
  t1.nuisances = options.nuisances1;
  t2.nuisances = options.nuisances2;
  const TransformedGroup z1 = transform_group(group1, options.k_star, t1);
  const TransformedGroup z2 = transform_group(group2, options.k_star, t2);

  PipelineResult out;
  out.clamp_warning = z1.clamp_warning || z2.clamp_warning;
  LambdaRule lambda = options.lambda;
  if (options.scenario == Scenario::PartialCorrelation && lambda.kind == LambdaRule::Kind::Tuned) {
    out.tuned_c = tune_lambda(pooled_fibers(z1), pooled_fibers(z2)).c;
    lambda = {LambdaRule::Kind::Scaled, *out.tuned_c};
  }
  out.group1 = group_estimates(z1, options.scenario, lambda);
  out.group2 = group_estimates(z2, options.scenario, lambda);
  out.stats = stat_pairs(out.group1, out.group2);
  out.sera = run_sera(out.stats.T, out.stats.U, options.sera);
  out.bh = bh_decide(out.sera.p, options.sera.alpha);
  return out;
}

}  // namespace tsera
