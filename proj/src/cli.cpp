#include "tsera/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <ostream>
#include <sstream>

#include "tsera/baseline.hpp"
#include "tsera/hypotheses.hpp"
#include "tsera/io.hpp"
#include "tsera/version.hpp"

namespace tsera {

namespace fs = std::filesystem;

namespace {

std::string provenance(std::string_view hash_input, std::uint64_t seed, bool with_seed) {
  std::string s = "# tsera " + std::string(kVersion) + "\n";
  s += "# config_hash " + fnv1a_hex(hash_input) + "\n";
  if (with_seed) s += "# master_seed " + std::to_string(seed) + "\n";
  return s;
}

std::string na_or(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

SeraConfig sera_options(double alpha, double screen_level, const std::string& kernel,
                        const std::string& bandwidth) {
  SeraConfig cfg;
  cfg.alpha = alpha;
  cfg.screen_level = screen_level;
  cfg.kernel = parse_kernel(kernel);
  if (bandwidth != "auto") {
    std::size_t used = 0;
    cfg.bandwidth = std::stod(bandwidth, &used);
    if (used != bandwidth.size()) throw DomainError("bad bandwidth '" + bandwidth + "'");
  }
  cfg.validate();
  return cfg;
}

void ensure_parent(const fs::path& file) {
  const auto parent = file.parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw IoError("output directory does not exist: " + parent.string());
  }
}

int do_simulate(const fs::path& config_path, const fs::path& out_dir, std::ostream& out) {
  const ExperimentConfig cfg = read_config(config_path);
  Rng rng(stream_seed(cfg.seed, 0));
  const SimulatedData data = simulate(cfg, rng);

  fs::create_directories(out_dir);
  auto write_group = [&](const std::vector<Tensor>& group, const std::string& name) {
    fs::create_directories(out_dir / name);
    std::string manifest;
    for (std::size_t l = 0; l < group.size(); ++l) {
      char file[32];
      std::snprintf(file, sizeof file, "obs_%04zu.tensor", l);
      write_tensor(group[l], out_dir / name / file);
      manifest += name + "/" + file + "\n";
    }
    atomic_write(out_dir / (name + ".manifest"), manifest);
  };
  write_group(data.group1, "group1");
  write_group(data.group2, "group2");

  for (std::size_t k = 0; k < data.sigmas1.size(); ++k) {
    const std::string mode = std::to_string(k + 1);
    write_matrix(data.sigmas1[k], out_dir / ("sigma1_mode" + mode + ".tensor"));
    write_matrix(data.sigmas2[k], out_dir / ("sigma2_mode" + mode + ".tensor"));
  }

  std::string truth = provenance(render_config(cfg), cfg.seed, true) + "i,j,signal\n";
  for (Index h = 0; h < static_cast<Index>(data.truth.mask.size()); ++h) {
    const auto [i, j] = pair_at(h, data.truth.dim);
    truth += std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
             (data.truth.mask[static_cast<std::size_t>(h)] ? "1" : "0") + "\n";
  }
  atomic_write(out_dir / "truth.csv", truth);
  out << "wrote " << data.group1.size() << " + " << data.group2.size() << " observations, "
      << data.truth.signals() << " signals to " << out_dir.string() << "\n";
  return kExitOk;
}

struct TestArgs {
  fs::path group1, group2, out;
  Index mode = 1;
  std::string scenario = "corr";
  double alpha = 0.05;
  std::vector<fs::path> oracle;
  std::string lambda = "tuned";
  double screen_level = 0.9;
  std::string kernel = "gaussian";
  std::string bandwidth = "auto";
};

int do_test(const TestArgs& a, std::ostream& out, std::ostream& err) {
  ensure_parent(a.out);
  const auto g1 = read_group(a.group1);
  const auto g2 = read_group(a.group2);
  const Index K = g1.front().order();
  if (a.mode < 1 || a.mode > K) {
    throw DomainError("--mode must lie in 1.." + std::to_string(K));
  }
  PipelineOptions opts;
  opts.scenario = parse_scenario(a.scenario);
  opts.k_star = a.mode - 1;
  opts.sera = sera_options(a.alpha, a.screen_level, a.kernel, a.bandwidth);
  opts.lambda = LambdaRule::parse(a.lambda);
  if (!a.oracle.empty()) {
    if (static_cast<Index>(a.oracle.size()) != 2 * (K - 1)) {
      throw DomainError("--oracle-sigmas needs " + std::to_string(2 * (K - 1)) +
                        " files (group 1 nuisance modes, then group 2)");
    }
    std::vector<Matrix> s1, s2;
    for (Index q = 0; q < K - 1; ++q) {
      s1.push_back(read_matrix(a.oracle[static_cast<std::size_t>(q)]));
      s2.push_back(read_matrix(a.oracle[static_cast<std::size_t>(K - 1 + q)]));
    }
    opts.nuisances1 = std::move(s1);
    opts.nuisances2 = std::move(s2);
  }
  const PipelineResult r = run_pipeline(g1, g2, opts);
  if (r.clamp_warning) err << "warning: nuisance covariance was near singular; eigenvalues clamped\n";

  std::ostringstream settings;
  settings << "test " << fs::absolute(a.group1).string() << " " << fs::absolute(a.group2).string()
           << " mode=" << a.mode << " scenario=" << a.scenario << " alpha=" << format_double(a.alpha)
           << " lambda=" << opts.lambda.render() << " screen=" << format_double(a.screen_level)
           << " kernel=" << a.kernel << " bandwidth=" << a.bandwidth << " oracle=" << a.oracle.size();
  std::string csv = provenance(settings.str(), 0, false);
  csv += "# tau " + format_double(r.sera.tau) + (r.sera.tau_fallback ? " (fallback)" : "") + "\n";
  csv += "# bandwidth " + format_double(r.sera.bandwidth) + "\n";
  csv += "i,j,rho1,rho2,T,U,p,pi_hat,p_weighted,reject\n";
  const Index m = r.stats.dim;
  for (Index h = 0; h < r.stats.T.size(); ++h) {
    const auto [i, j] = pair_at(h, m);
    csv += std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
           format_double(r.group1.rho(i, j)) + "," + format_double(r.group2.rho(i, j)) + "," +
           format_double(r.stats.T(h)) + "," + format_double(r.stats.U(h)) + "," +
           format_double(r.sera.p(h)) + "," + format_double(r.sera.pi_hat(h)) + "," +
           format_double(r.sera.p_w(h)) + "," + (r.sera.reject[static_cast<std::size_t>(h)] ? "1" : "0") +
           "\n";
  }
  atomic_write(a.out, csv);
  out << r.sera.rejections() << " of " << r.stats.T.size() << " hypotheses rejected\n";
  return kExitOk;
}

int do_bench(const fs::path& config_path, const fs::path& out_path, bool timing,
             std::optional<unsigned> threads, std::ostream& out, std::ostream& err) {
  ensure_parent(out_path);
  ExperimentConfig cfg = read_config(config_path);
  if (threads) cfg.threads = *threads;
  const ExperimentResult result = run_experiment(cfg);
  for (const auto& f : result.failures) {
    err << "replication " << f.index << " (seed " << f.seed << ") failed: " << f.message << "\n";
  }
  atomic_write(out_path, render_results_csv(cfg, result, timing));
  for (const auto& s : result.summaries) {
    out << method_name(s.method) << ": fdr " << format_double(s.fdr) << ", power " << na_or(s.power)
        << "\n";
  }
  return kExitOk;
}

struct SeraArgs {
  fs::path pairs, out;
  double alpha = 0.05;
  double screen_level = 0.9;
  std::string kernel = "gaussian";
  std::string bandwidth = "auto";
};

int do_sera(const SeraArgs& a, std::ostream& out) {
  ensure_parent(a.out);
  const CsvTable table = read_csv(a.pairs);
  if (table.rows.empty()) throw ParseError(a.pairs.string() + ": no rows");
  const SeraConfig cfg = sera_options(a.alpha, a.screen_level, a.kernel, a.bandwidth);
  const Vector U = table.numeric("U");
  DecisionSet d;
  if (table.column("T")) {
    d = run_sera(table.numeric("T"), U, cfg);
  } else if (table.column("p")) {
    const Vector p = table.numeric("p");
    for (Index h = 0; h < p.size(); ++h) {
      if (!(p(h) >= 0.0 && p(h) <= 1.0)) {
        throw ParseError(a.pairs.string() + ": p-value in row " + std::to_string(h + 1) +
                         " outside [0,1]");
      }
    }
    d = run_sera_pvalues(p, U, cfg);
  } else {
    throw ParseError(a.pairs.string() + ": needs a T or p column next to U");
  }
  std::ostringstream settings;
  settings << "sera " << fs::absolute(a.pairs).string() << " alpha=" << format_double(a.alpha)
           << " screen=" << format_double(a.screen_level) << " kernel=" << a.kernel
           << " bandwidth=" << a.bandwidth;
  std::string csv = provenance(settings.str(), 0, false);
  csv += "# tau " + format_double(d.tau) + (d.tau_fallback ? " (fallback)" : "") + "\n";
  csv += "# bandwidth " + format_double(d.bandwidth) + "\n";
  csv += "row,p,U,pi_hat,p_weighted,reject\n";
  for (Index h = 0; h < d.p.size(); ++h) {
    csv += std::to_string(h + 1) + "," + format_double(d.p(h)) + "," + format_double(U(h)) + "," +
           format_double(d.pi_hat(h)) + "," + format_double(d.p_w(h)) + "," +
           (d.reject[static_cast<std::size_t>(h)] ? "1" : "0") + "\n";
  }
  atomic_write(a.out, csv);
  out << d.rejections() << " of " << d.p.size() << " hypotheses rejected\n";
  return kExitOk;
}

}  // namespace

std::string render_results_csv(const ExperimentConfig& cfg, const ExperimentResult& result,
                               bool timing) {
  ExperimentConfig hashed = cfg;
  hashed.threads = 0;  // scheduling does not change results
  std::string csv = provenance(render_config(hashed), cfg.seed, true);
  for (const auto& f : result.failures) {
    csv += "# failed replication " + std::to_string(f.index) + " seed " + std::to_string(f.seed) +
           "\n";
  }
  csv += "method,scenario,design,R,fdr,fdr_se,power,power_se,mean_rejections,seconds,master_seed\n";
  for (const auto& s : result.summaries) {
    csv += method_name(s.method) + "," + scenario_name(cfg.scenario) + "," + cfg.design.name() + "," +
           std::to_string(s.replications) + "," + format_double(s.fdr) + "," +
           format_double(s.fdr_se) + "," + na_or(s.power) + "," + na_or(s.power_se) + "," +
           format_double(s.mean_rejections) + "," + (timing ? format_double(s.seconds) : "NA") + "," +
           std::to_string(cfg.seed) + "\n";
  }
  return csv;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-sample tests for changes in tensor-mode correlation structure", "tsera"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  fs::path sim_config, sim_out;
  auto* sim = app.add_subcommand("simulate", "Draw one dataset from a config");
  sim->add_option("--config", sim_config, "experiment config")->required();
  sim->add_option("--out", sim_out, "output directory")->required();

  TestArgs ta;
  auto* test = app.add_subcommand("test", "Test two groups of tensors");
  test->add_option("--group1", ta.group1, "manifest of group 1")->required();
  test->add_option("--group2", ta.group2, "manifest of group 2")->required();
  test->add_option("--mode", ta.mode, "mode of interest (1-based)")->required();
  test->add_option("--scenario", ta.scenario)->check(CLI::IsMember({"corr", "pcorr"}));
  test->add_option("--alpha", ta.alpha)->check(CLI::Range(0.0, 1.0));
  test->add_option("--oracle-sigmas", ta.oracle, "known nuisance covariances");
  test->add_option("--lambda", ta.lambda, "tuned | auto | c=<real> | <real>");
  test->add_option("--screen-level", ta.screen_level)->check(CLI::Range(0.0, 1.0));
  test->add_option("--kernel", ta.kernel)->check(CLI::IsMember({"gaussian", "epanechnikov"}));
  test->add_option("--bandwidth", ta.bandwidth, "auto | <real>");
  test->add_option("--out", ta.out, "output CSV")->required();

  fs::path bench_config, bench_out;
  bool timing = false;
  std::optional<unsigned> threads;
  auto* bench = app.add_subcommand("bench", "Monte Carlo FDR and power");
  bench->add_option("--config", bench_config)->required();
  bench->add_option("--out", bench_out)->required();
  bench->add_flag("--timing", timing, "record wall-clock seconds");
  bench->add_option("--threads", threads);

  SeraArgs sa;
  auto* sera = app.add_subcommand("sera", "Weighted FDR procedure on given statistics");
  sera->add_option("--pairs", sa.pairs, "CSV with T,U or p,U columns")->required();
  sera->add_option("--alpha", sa.alpha)->check(CLI::Range(0.0, 1.0));
  sera->add_option("--screen-level", sa.screen_level)->check(CLI::Range(0.0, 1.0));
  sera->add_option("--kernel", sa.kernel)->check(CLI::IsMember({"gaussian", "epanechnikov"}));
  sera->add_option("--bandwidth", sa.bandwidth, "auto | <real>");
  sera->add_option("--out", sa.out)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*sim) return do_simulate(sim_config, sim_out, out);
    if (*test) return do_test(ta, out, err);
    if (*bench) return do_bench(bench_config, bench_out, timing, threads, out, err);
    return do_sera(sa, out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace tsera
