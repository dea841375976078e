#include "tsera/baseline.hpp"

namespace tsera {

DecisionSet bh_decide(const Vector& p, double alpha) {
  const Index M = p.size();
  if (M == 0) throw DomainError("bh_decide: no p-values");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("bh_decide: alpha must lie in (0,1)");
  DecisionSet out;
  out.p = p;
  out.p_w = p;
  const auto order = stable_order(p);
  for (Index k = 1; k <= M; ++k) {
    if (p(order[static_cast<std::size_t>(k - 1)]) <= alpha * static_cast<double>(k) / static_cast<double>(M)) {
      out.q_hat = k;
    }
  }
  out.reject.assign(static_cast<std::size_t>(M), false);
  for (Index k = 0; k < out.q_hat; ++k) out.reject[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = true;
  return out;
}

}  // namespace tsera
