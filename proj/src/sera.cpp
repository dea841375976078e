#include "tsera/sera.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tsera {

Kernel parse_kernel(std::string_view name) {
  if (name == "gaussian") return Kernel::Gaussian;
  if (name == "epanechnikov") return Kernel::Epanechnikov;
  throw DomainError("unknown kernel '" + std::string(name) + "'");
}

std::string kernel_name(Kernel k) {
  return k == Kernel::Gaussian ? "gaussian" : "epanechnikov";
}

void SeraConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  if (!(screen_level > 0.0 && screen_level < 1.0)) throw DomainError("screen level must lie in (0,1)");
  if (!(trunc_xi > 0.0 && trunc_xi < 0.5)) throw DomainError("truncation xi must lie in (0,0.5)");
  if (bandwidth && !(*bandwidth > 0.0)) throw DomainError("bandwidth must be positive");
}

Vector p_values(const Vector& T) {
  Vector p(T.size());
  for (Index h = 0; h < T.size(); ++h) {
    if (!std::isfinite(T(h))) throw DomainError("p_values: non-finite statistic");
    p(h) = std::clamp(std::erfc(std::abs(T(h)) / std::sqrt(2.0)), 0.0, 1.0);
  }
  return p;
}

std::vector<Index> stable_order(const Vector& values) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a) < values(b); });
  return order;
}

Screen screen_tau(const Vector& p, double level) {
  const Index M = p.size();
  if (M == 0) throw DomainError("screen_tau: no p-values");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("screen_tau: level must lie in (0,1)");
  const auto order = stable_order(p);
  Index k_hat = 0;
  for (Index k = 1; k <= M; ++k) {
    if (p(order[static_cast<std::size_t>(k - 1)]) <= level * static_cast<double>(k) / static_cast<double>(M)) {
      k_hat = k;
    }
  }
  Screen out;
  out.fallback = k_hat == 0;
  out.tau = out.fallback ? 0.5 : p(order[static_cast<std::size_t>(k_hat - 1)]);
  out.mask.resize(static_cast<std::size_t>(M));
  for (Index h = 0; h < M; ++h) out.mask[static_cast<std::size_t>(h)] = p(h) > out.tau;
  return out;
}

double normal_scale_bandwidth(const Vector& U) {
  const Index M = U.size();
  if (M < 2) throw DomainError("bandwidth needs at least two points");
  const double mean = U.mean();
  const double sd = std::sqrt((U.array() - mean).square().sum() / static_cast<double>(M - 1));
  if (!(sd > 0.0)) return 1.0;
  return std::pow(4.0 / (3.0 * static_cast<double>(M)), 0.2) * sd;
}

Vector estimate_pi(const Vector& U, const Screen& screen, const SeraConfig& cfg) {
  cfg.validate();
  const Index M = U.size();
  if (M < 2) throw DomainError("estimate_pi: need at least two hypotheses");
  if (static_cast<Index>(screen.mask.size()) != M) throw ShapeError("estimate_pi: screen mask size");
  if (!(screen.tau < 1.0)) throw DomainError("estimate_pi: tau must be below 1");
  const double h = cfg.bandwidth ? *cfg.bandwidth : normal_scale_bandwidth(U);
  if (!(h > 0.0)) throw DomainError("estimate_pi: bandwidth must be positive");

  // v_h(a, b) = K((a-b)/h) / K(0); the 1/h factors cancel.
  auto v = [&](double d) {
    const double x = d / h;
    if (cfg.kernel == Kernel::Gaussian) return std::exp(-0.5 * x * x);
    return std::max(0.0, 1.0 - x * x);
  };

  Vector pi(M);
  for (Index a = 0; a < M; ++a) {
    double screened = 0.0, total = 0.0;
    for (Index b = 0; b < M; ++b) {
      const double k = v(U(a) - U(b));
      total += k;
      if (screen.mask[static_cast<std::size_t>(b)]) screened += k;
    }
    const double raw = 1.0 - screened / ((1.0 - screen.tau) * total);
    pi(a) = std::clamp(raw, cfg.trunc_xi, 1.0 - cfg.trunc_xi);
  }
  return pi;
}

Index DecisionSet::rejections() const {
  return static_cast<Index>(std::count(reject.begin(), reject.end(), true));
}

DecisionSet sera_decide(const Vector& p, const Vector& pi_hat, double alpha) {
  const Index M = p.size();
  if (pi_hat.size() != M) throw ShapeError("sera_decide: p and pi_hat sizes differ");
  if (M == 0) throw DomainError("sera_decide: no hypotheses");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("sera_decide: alpha must lie in (0,1)");
  if (!((pi_hat.array() > 0.0).all() && (pi_hat.array() < 1.0).all())) {
    throw DomainError("sera_decide: pi_hat must lie strictly inside (0,1)");
  }
  DecisionSet out;
  out.p = p;
  out.pi_hat = pi_hat;
  out.w = pi_hat.array() / (1.0 - pi_hat.array());
  out.p_w = p.array() / out.w.array();
  const double pi_sum = pi_hat.sum();
  const auto order = stable_order(out.p_w);
  for (Index q = 1; q <= M; ++q) {
    if (pi_sum * out.p_w(order[static_cast<std::size_t>(q - 1)]) / static_cast<double>(q) <= alpha) {
      out.q_hat = q;
    }
  }
  out.reject.assign(static_cast<std::size_t>(M), false);
  for (Index q = 0; q < out.q_hat; ++q) out.reject[static_cast<std::size_t>(order[static_cast<std::size_t>(q)])] = true;
  return out;
}

DecisionSet run_sera_pvalues(const Vector& p, const Vector& U, const SeraConfig& cfg) {
  cfg.validate();
  if (p.size() != U.size()) throw ShapeError("run_sera: p and U sizes differ");
  const Screen screen = screen_tau(p, cfg.screen_level);
  const Vector pi = estimate_pi(U, screen, cfg);
  DecisionSet out = sera_decide(p, pi, cfg.alpha);
  out.tau = screen.tau;
  out.tau_fallback = screen.fallback;
  out.bandwidth = cfg.bandwidth ? *cfg.bandwidth : normal_scale_bandwidth(U);
  return out;
}

DecisionSet run_sera(const Vector& T, const Vector& U, const SeraConfig& cfg) {
  return run_sera_pvalues(p_values(T), U, cfg);
}

}  // namespace tsera
