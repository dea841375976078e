#pragma once

#include "tsera/tensor.hpp"
#include "tsera/transform.hpp"

namespace tsera {

/// Per-group (partial) correlation estimates over the mode-of-interest pairs.
/// `nu` is symmetric with an unused (zero) diagonal.
struct GroupEstimates {
  Matrix rho;
  Matrix nu;
  double n_eff = 0.0;
};

/// Statistic pairs in hypothesis order (see hypotheses.hpp).
struct StatField {
  Index dim = 0;
  Vector T;
  Vector U;
  Vector kappa;
};

/// Sample correlation of pooled fibers (columns of `fibers`, m_{k*} x N) and
/// the variance of each entry estimated from the scatter of fiber products.
GroupEstimates corr_estimates(const Matrix& fibers);
GroupEstimates corr_estimates(const TransformedGroup& tg);

/// T = (rho1 - rho2) / sqrt(nu1 + nu2),
/// U = (rho1 + kappa rho2) / sqrt(nu1 + kappa^2 nu2), kappa = nu1 / nu2.
StatField stat_pairs(const GroupEstimates& g1, const GroupEstimates& g2);

}  // namespace tsera
