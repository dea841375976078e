#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsera/tensor.hpp"

namespace tsera {

enum class Kernel { Gaussian, Epanechnikov };

Kernel parse_kernel(std::string_view name);
std::string kernel_name(Kernel k);

struct SeraConfig {
  double alpha = 0.05;
  double screen_level = 0.9;  // BH level that picks tau
  Kernel kernel = Kernel::Gaussian;
  std::optional<double> bandwidth;  // empty: normal-scale rule
  double trunc_xi = 1e-5;

  void validate() const;
  bool operator==(const SeraConfig&) const = default;
};

/// Two-sided normal p-values 2 (1 - Phi(|T|)).
Vector p_values(const Vector& T);

struct Screen {
  double tau = 0.5;
  std::vector<bool> mask;  // p > tau
  bool fallback = false;   // BH at `level` rejected nothing, tau set to 0.5
};

/// tau = the largest p_(k) with p_(k) <= level k / M.
Screen screen_tau(const Vector& p, double level);

/// Normal-scale bandwidth (4 / (3 M))^{1/5} sd(U); 1 when sd(U) is zero.
double normal_scale_bandwidth(const Vector& U);

/// Kernel-smoothed fraction of screened hypotheses around each U, turned into
///   1 - sum_screen v / ((1 - tau) sum_all v)
/// and truncated into [xi, 1 - xi]. Self pairs are included in both sums.
Vector estimate_pi(const Vector& U, const Screen& screen, const SeraConfig& cfg);

struct DecisionSet {
  Vector p;
  Vector pi_hat;
  Vector w;
  Vector p_w;
  Index q_hat = 0;
  std::vector<bool> reject;
  double tau = 0.0;
  bool tau_fallback = false;
  double bandwidth = 0.0;

  Index rejections() const;
};

/// Weighted step-up: w = pi/(1-pi), p_w = p/w, reject the q_hat smallest p_w
/// where q_hat = max{q : sum(pi) p_w(q) / q <= alpha}. Ties in p_w are
/// ordered by hypothesis index.
DecisionSet sera_decide(const Vector& p, const Vector& pi_hat, double alpha);

/// Full procedure on externally supplied (T, U) or (p, U) pairs.
DecisionSet run_sera(const Vector& T, const Vector& U, const SeraConfig& cfg);
DecisionSet run_sera_pvalues(const Vector& p, const Vector& U, const SeraConfig& cfg);

/// Indices 0..M-1 ordered by value, ties by index.
std::vector<Index> stable_order(const Vector& values);

}  // namespace tsera
