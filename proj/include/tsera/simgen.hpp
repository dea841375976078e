#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tsera/rng.hpp"
#include "tsera/tensor.hpp"

namespace tsera {

enum class StructureKind { Identity, Band, Hub, Random, AR, MA };

/// Named covariance / precision structure. `split` marks the paired
/// construction where two groups share a base and differ on a random half of
/// its support.
struct StructureModel {
  StructureKind kind = StructureKind::Identity;
  double ar_rate = 0.0;  // AR: rho_{ij} = rate^{|i-j|}
  int ma_lag = 0;        // MA: 1/(|i-j|+1) for 1 <= |i-j| <= lag
  bool split = false;

  /// Accepts identity, band, hub, random, arN (rate 0.N), maQ, split:<base>.
  static StructureModel parse(std::string_view name);
  std::string name() const;
  void validate() const;
  bool operator==(const StructureModel&) const = default;
};

/// Alteration mask over the hypotheses (i < j) of an m x m structure.
struct GroundTruth {
  Index dim = 0;
  std::vector<bool> mask;

  Index signals() const;
};

/// Builds the m x m structure. Hub and Random receive the shift
/// P + (|lambda_min(P)| + 0.05) I when pd_fix is set; Random needs `rng`.
Matrix gen_structure(const StructureModel& model, Index m, Rng& rng, bool pd_fix = true);

/// Mask of positions where the diagonal-normalized targets differ by more than tol.
GroundTruth truth_from_targets(const Matrix& first, const Matrix& second, double tol = 1e-12);

struct SplitPairResult {
  Matrix first;
  Matrix second;
  GroundTruth truth;
  bool empty_signal = false;
};

/// Random half of the base support, divided into two equal sets G1 (gets the
/// odd element) and G2; group d doubles the base entries on G_d, and both
/// groups get the same diagonal shift (varsigma + 0.05) I.
SplitPairResult split_pair(const StructureModel& base, Index m, Rng& rng);

/// Mode-of-interest design for the two groups: either two named structures
/// ("band/hub") or one split construction ("split:band").
struct ModeDesign {
  StructureModel first;
  StructureModel second;

  static ModeDesign parse(std::string_view text);
  std::string name() const;
  bool operator==(const ModeDesign&) const = default;
};

struct DesignTargets {
  Matrix first;
  Matrix second;
  GroundTruth truth;
};

DesignTargets generate_design(const ModeDesign& design, Index m, Rng& rng);

/// n draws of M + G x {Sigma_0^{1/2}, ..., Sigma_{K-1}^{1/2}} with G standard normal.
std::vector<Tensor> sample_group(const Tensor& mean, const std::vector<Matrix>& sigmas, Index n,
                                 Rng& rng);

/// Tensor with i.i.d. scale * N(0, 1) entries.
Tensor random_mean(const Tensor::Shape& shape, double scale, Rng& rng);

}  // namespace tsera
