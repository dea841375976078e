#include "tsera/transform.hpp"

#include <string>

#include "tsera/linalg.hpp"

namespace tsera {

Index TransformedGroup::n_eff() const {
  if (samples.empty()) return 0;
  return static_cast<Index>(samples.size()) * (samples.front().size() / fiber_dim());
}

Matrix pooled_fibers(const TransformedGroup& tg) {
  if (tg.samples.empty()) throw DomainError("pooled_fibers: no transformed samples");
  const Index per = tg.samples.front().size() / tg.fiber_dim();
  Matrix X(tg.fiber_dim(), per * static_cast<Index>(tg.samples.size()));
  for (std::size_t l = 0; l < tg.samples.size(); ++l) {
    X.middleCols(static_cast<Index>(l) * per, per) = matricize(tg.samples[l], tg.k_star);
  }
  return X;
}

TransformedGroup transform_group(const std::vector<Tensor>& group, Index k_star,
                                 const TransformOptions& options) {
  const Index n = static_cast<Index>(group.size());
  if (n < 2) throw DomainError("transform_group needs at least 2 observations, got " + std::to_string(n));
  const Index K = group.front().order();
  group.front().check_mode(k_star);

  TransformedGroup out;
  out.k_star = k_star;

  std::vector<std::optional<Matrix>> mats(static_cast<std::size_t>(K + 1));
  if (options.nuisances && static_cast<Index>(options.nuisances->size()) != K - 1) {
    throw ShapeError("transform_group: expected " + std::to_string(K - 1) + " nuisance matrices");
  }
  for (Index k = 0, slot = 0; k < K; ++k) {
    if (k == k_star) continue;
    Matrix sigma;
    if (options.nuisances) {
      sigma = (*options.nuisances)[static_cast<std::size_t>(slot++)];
      if (sigma.rows() != group.front().dim(k) || sigma.cols() != group.front().dim(k)) {
        throw ShapeError("transform_group: nuisance for mode " + std::to_string(k) +
                         " has the wrong size");
      }
    } else {
      sigma = options.estimator ? options.estimator(group, k) : pooled_mode_covariance(group, k);
    }
    auto root = sym_inv_sqrt(sigma, options.floor_ratio);
    out.clamp_warning = out.clamp_warning || root.warning;
    mats[static_cast<std::size_t>(k)] = std::move(root.value);
  }
  mats[static_cast<std::size_t>(K)] = centering_rotation(n);

  const Tensor rotated = tucker(stack(group), mats);
  out.samples.reserve(static_cast<std::size_t>(n - 1));
  for (Index l = 0; l + 1 < n; ++l) out.samples.push_back(slice_last(rotated, l));
  return out;
}

}  // namespace tsera
