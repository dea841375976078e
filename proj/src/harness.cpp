#include "tsera/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "tsera/baseline.hpp"

namespace tsera {

Evaluation evaluate(const std::vector<bool>& reject, const GroundTruth& truth) {
  if (reject.size() != truth.mask.size()) throw ShapeError("evaluate: decision and truth sizes differ");
  Evaluation e;
  Index true_rejections = 0;
  for (std::size_t h = 0; h < reject.size(); ++h) {
    if (truth.mask[h]) ++e.signals;
    if (!reject[h]) continue;
    ++e.rejections;
    if (truth.mask[h]) {
      ++true_rejections;
    } else {
      ++e.false_rejections;
    }
  }
  e.fdp = static_cast<double>(e.false_rejections) / static_cast<double>(std::max<Index>(e.rejections, 1));
  if (e.signals > 0) e.power = static_cast<double>(true_rejections) / static_cast<double>(e.signals);
  return e;
}

Method parse_method(std::string_view name) {
  if (name == "tsera") return Method::TSera;
  if (name == "tbh") return Method::TBh;
  if (name == "tsera_oracle") return Method::TSeraOracle;
  if (name == "tbh_oracle") return Method::TBhOracle;
  throw DomainError("unknown method '" + std::string(name) + "'");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::TSera: return "tsera";
    case Method::TBh: return "tbh";
    case Method::TSeraOracle: return "tsera_oracle";
    case Method::TBhOracle: return "tbh_oracle";
  }
  return "?";
}

NuisanceDesign NuisanceDesign::parse(std::string_view text) {
  if (text == "ar") return {StructureModel::parse("ar4"), StructureModel::parse("ar5")};
  if (text == "ma") return {StructureModel::parse("ma3"), StructureModel::parse("ma4")};
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    auto s = StructureModel::parse(text);
    if (s.split) throw DomainError("nuisance structures cannot be split designs");
    return {s, s};
  }
  auto a = StructureModel::parse(text.substr(0, slash));
  auto b = StructureModel::parse(text.substr(slash + 1));
  if (a.split || b.split) throw DomainError("nuisance structures cannot be split designs");
  return {a, b};
}

std::string NuisanceDesign::name() const { return first.name() + "/" + second.name(); }

void ExperimentConfig::validate() const {
  if (shape.size() < 2) throw DomainError("experiment shape needs at least two modes");
  for (Index m : shape)
    if (m < 2) throw DomainError("every experiment dimension must be >= 2");
  if (n1 < 2 || n2 < 2) throw DomainError("each group needs at least 2 observations");
  if (k_star < 0 || k_star >= static_cast<Index>(shape.size())) throw DomainError("mode of interest out of range");
  if (replications < 1) throw DomainError("replications must be >= 1");
  if (methods.empty()) throw DomainError("no methods selected");
  SeraConfig s = sera;
  s.alpha = alpha;
  s.validate();
}

std::vector<Matrix> SimulatedData::nuisances(int group, Index k_star) const {
  const auto& all = group == 1 ? sigmas1 : sigmas2;
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < all.size(); ++k)
    if (static_cast<Index>(k) != k_star) out.push_back(all[k]);
  return out;
}

SimulatedData simulate(const ExperimentConfig& cfg, Rng& rng) {
  cfg.validate();
  SimulatedData d;
  const Index K = static_cast<Index>(cfg.shape.size());
  auto targets = generate_design(cfg.design, cfg.shape[static_cast<std::size_t>(cfg.k_star)], rng);
  d.target1 = std::move(targets.first);
  d.target2 = std::move(targets.second);
  d.truth = std::move(targets.truth);
  for (Index k = 0; k < K; ++k) {
    const Index mk = cfg.shape[static_cast<std::size_t>(k)];
    if (k == cfg.k_star) {
      if (cfg.scenario == Scenario::Correlation) {
        d.sigmas1.push_back(d.target1);
        d.sigmas2.push_back(d.target2);
      } else {
        d.sigmas1.push_back(d.target1.inverse());
        d.sigmas2.push_back(d.target2.inverse());
      }
    } else {
      d.sigmas1.push_back(gen_structure(cfg.nuisance.first, mk, rng));
      d.sigmas2.push_back(gen_structure(cfg.nuisance.second, mk, rng));
    }
  }
  const Tensor mean1 = random_mean(cfg.shape, cfg.mean_scale1, rng);
  const Tensor mean2 = random_mean(cfg.shape, cfg.mean_scale2, rng);
  d.group1 = sample_group(mean1, d.sigmas1, cfg.n1, rng);
  d.group2 = sample_group(mean2, d.sigmas2, cfg.n2, rng);
  return d;
}

namespace {

bool is_oracle(Method m) { return m == Method::TSeraOracle || m == Method::TBhOracle; }

}  // namespace

ReplicationRecord run_replication(const ExperimentConfig& cfg, Index index) {
  ReplicationRecord rec;
  rec.index = index;
  rec.seed = stream_seed(cfg.seed, static_cast<std::uint64_t>(index));
  Rng rng(rec.seed);
  const SimulatedData data = simulate(cfg, rng);

  PipelineOptions opts;
  opts.scenario = cfg.scenario;
  opts.k_star = cfg.k_star;
  opts.sera = cfg.sera;
  opts.sera.alpha = cfg.alpha;
  opts.lambda = cfg.lambda;

  std::optional<PipelineResult> driven, oracle;
  double driven_seconds = 0.0, oracle_seconds = 0.0;
  auto timed = [](auto&& fn, double& seconds) {
    const auto start = std::chrono::steady_clock::now();
    auto result = fn();
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  };
  const bool need_driven = std::any_of(cfg.methods.begin(), cfg.methods.end(),
                                       [](Method m) { return !is_oracle(m); });
  const bool need_oracle = std::any_of(cfg.methods.begin(), cfg.methods.end(), is_oracle);
  if (need_driven) {
    driven = timed([&] { return run_pipeline(data.group1, data.group2, opts); }, driven_seconds);
  }
  if (need_oracle) {
    PipelineOptions o = opts;
    o.nuisances1 = data.nuisances(1, cfg.k_star);
    o.nuisances2 = data.nuisances(2, cfg.k_star);
    oracle = timed([&] { return run_pipeline(data.group1, data.group2, o); }, oracle_seconds);
  }

  for (Method m : cfg.methods) {
    const PipelineResult& r = is_oracle(m) ? *oracle : *driven;
    const bool sera = m == Method::TSera || m == Method::TSeraOracle;
    rec.evaluations.push_back(evaluate(sera ? r.sera.reject : r.bh.reject, data.truth));
    rec.seconds.push_back(is_oracle(m) ? oracle_seconds : driven_seconds);
  }
  return rec;
}

namespace {

std::pair<double, double> mean_and_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Index R = cfg.replications;
  std::vector<std::optional<ReplicationRecord>> slots(static_cast<std::size_t>(R));
  std::vector<std::optional<std::string>> errors(static_cast<std::size_t>(R));

  std::atomic<Index> next{0};
  auto worker = [&] {
    for (Index r = next++; r < R; r = next++) {
      try {
        slots[static_cast<std::size_t>(r)] = run_replication(cfg, r);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(r)] = e.what();
      }
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<Index>(threads, R));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  ExperimentResult out;
  for (Index r = 0; r < R; ++r) {
    if (slots[static_cast<std::size_t>(r)]) {
      out.records.push_back(std::move(*slots[static_cast<std::size_t>(r)]));
    } else {
      out.failures.push_back({r, stream_seed(cfg.seed, static_cast<std::uint64_t>(r)),
                              errors[static_cast<std::size_t>(r)].value_or("unknown failure")});
    }
  }
  if (static_cast<double>(out.failures.size()) > 0.05 * static_cast<double>(R)) {
    throw NumericalError(std::to_string(out.failures.size()) + " of " + std::to_string(R) +
                         " replications failed; first: " + out.failures.front().message);
  }

  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    std::vector<double> fdp, power, rejections;
    MethodSummary s;
    s.method = cfg.methods[mi];
    for (const auto& rec : out.records) {
      const Evaluation& e = rec.evaluations[mi];
      fdp.push_back(e.fdp);
      if (e.power) power.push_back(*e.power);
      rejections.push_back(static_cast<double>(e.rejections));
      s.seconds += rec.seconds[mi];
    }
    s.replications = static_cast<Index>(out.records.size());
    if (!fdp.empty()) std::tie(s.fdr, s.fdr_se) = mean_and_se(fdp);
    if (!power.empty()) {
      auto [p, se] = mean_and_se(power);
      s.power = p;
      s.power_se = se;
    }
    if (!rejections.empty()) s.mean_rejections = mean_and_se(rejections).first;
    out.summaries.push_back(s);
  }
  return out;
}

}  // namespace tsera
