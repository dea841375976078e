#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tsera/lasso.hpp"
#include "tsera/stats.hpp"
#include "tsera/transform.hpp"

namespace tsera {

/// Penalty for node i: either a fixed value or
///   c * sqrt(S_ii) * sqrt(log m_{k*} / N_d),
/// where S_ii is the pooled second moment of coordinate i ("auto" is c = 2).
/// Tuned picks c = b/20, b in 1..40, per pair of groups (see tune_lambda).
struct LambdaRule {
  enum class Kind { Scaled, Fixed, Tuned };
  Kind kind = Kind::Scaled;
  double value = 2.0;

  /// "auto" | "tuned" | "<positive real>" | "c=<real>" ("inf" allowed for a
  /// fixed value).
  static LambdaRule parse(std::string_view text);
  std::string render() const;
  bool operator==(const LambdaRule&) const = default;
};

/// Node-wise regressions of each mode-k* coordinate on the others over all
/// pooled fibers.
struct NodewiseFit {
  Matrix eta;        // m x (m-1): row i regresses node i on the others, self column removed
  Vector lambda;     // penalty used per node
  Matrix residuals;  // m x N, column f is the residual of fiber f
};

/// Coefficient of variable `var` in the regression of node `node` (node != var).
inline double node_coefficient(const Matrix& eta, Index node, Index var) {
  return eta(node, var < node ? var : var - 1);
}

NodewiseFit nodewise_regress(const Matrix& fibers, const LambdaRule& rule,
                             const LassoOptions& options = {});
NodewiseFit nodewise_regress(const TransformedGroup& tg, const LambdaRule& rule,
                             const LassoOptions& options = {});

struct PcorrEstimates {
  Matrix r_tilde;  // residual sample covariance
  Matrix r_hat;    // debiased, r_hat(i,i) = r_tilde(i,i)
  Matrix rho;
  Matrix nu;       // symmetric, zero diagonal
  double n_eff = 0.0;

  GroupEstimates as_group_estimates() const { return {rho, nu, n_eff}; }
};

/// Residual covariance, bias correction, partial correlations and their
/// variances:
///   r_hat(i,j) = -(r~(i,j) + r~(i,i) b_{j->i} + r~(j,j) b_{i->j}),
///   nu(i,j)    = (1 + b_{j->i}^2 r_hat(i,i) / r_hat(j,j)) / N,
/// with b_{a->v} the coefficient of variable v in node a's regression.
PcorrEstimates pcorr_estimates(const NodewiseFit& fit);

struct LambdaTuning {
  double c = 0.0;               // chosen constant b/20
  std::vector<double> scores;   // criterion for b = 1..40
};

/// Data-driven constant for the scaled rule. For each b the two-sample
/// statistics T(b) are formed and scored by
///   sum_{k=1}^{10} ( #{|T(b)| >= z_{1-k/20}} / (k M / 10) - 1 )^2,
/// i.e. how far the tail counts are from those of a standard normal; the
/// smallest score wins (ties to the smaller b).
LambdaTuning tune_lambda(const Matrix& fibers1, const Matrix& fibers2,
                         const LassoOptions& options = {});

}  // namespace tsera
