#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tsera/tensor.hpp"

namespace tsera {

/// Output of the decorrelation/centralization step: n_d - 1 samples whose
/// nuisance modes are whitened and whose common mean is removed.
struct TransformedGroup {
  std::vector<Tensor> samples;
  Index k_star = 0;
  bool clamp_warning = false;  // some nuisance inverse root hit the eigenvalue floor

  Index fiber_dim() const { return samples.front().dim(k_star); }
  /// N_d = (n_d - 1) m / m_{k*}.
  Index n_eff() const;
};

/// All mode-k* fibers of all transformed samples as columns (m_{k*} x N_d),
/// sample-major.
Matrix pooled_fibers(const TransformedGroup& tg);

using NuisanceEstimator = std::function<Matrix(const std::vector<Tensor>&, Index)>;

struct TransformOptions {
  /// Known nuisance covariances for every mode except k*, in increasing mode
  /// order. When absent they are estimated with `estimator`.
  std::optional<std::vector<Matrix>> nuisances;
  NuisanceEstimator estimator;  // defaults to pooled_mode_covariance
  double floor_ratio = 1e-10;
};

TransformedGroup transform_group(const std::vector<Tensor>& group, Index k_star,
                                 const TransformOptions& options = {});

}  // namespace tsera
