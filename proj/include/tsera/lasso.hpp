#pragma once

#include "tsera/error.hpp"
#include "tsera/tensor.hpp"

namespace tsera {

struct LassoOptions {
  double tol = 1e-8;       // max absolute coefficient change per sweep
  int max_sweeps = 10000;
};

/// Thrown when the sweep budget runs out; carries the last iterate.
class LassoNonConvergence : public NumericalError {
 public:
  LassoNonConvergence(Vector last, int sweeps)
      : NumericalError("lasso did not converge in " + std::to_string(sweeps) + " sweeps"),
        last_(std::move(last)) {}
  const Vector& last_iterate() const { return last_; }

 private:
  Vector last_;
};

inline double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

/// Covariance-form coordinate descent for
///   min_b  b^T G b / 2 - c^T b + lambda |b|_1
/// with G = X^T X / N, c = X^T y / N. G must have a positive diagonal
/// wherever a coefficient can become active.
Vector lasso_gram(const Matrix& G, const Vector& c, double lambda,
                  const LassoOptions& options = {});

/// Lasso (2N)^{-1} |y - X~ b|^2 + lambda |b|_1 over the columns of X
/// standardized to unit second moment; returns coefficients on the original
/// column scale. All-zero columns get a zero coefficient.
Vector lasso_cd(const Matrix& X, const Vector& y, double lambda, const LassoOptions& options = {});

/// Objective value of lasso_cd's problem in standardized coordinates, for a
/// coefficient vector on the original scale.
double lasso_objective(const Matrix& X, const Vector& y, double lambda, const Vector& beta);

}  // namespace tsera
