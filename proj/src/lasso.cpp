#include "tsera/lasso.hpp"

#include <cassert>
#include <cmath>

namespace tsera {

namespace {

[[maybe_unused]] double gram_objective(const Matrix& G, const Vector& c, double lambda,
                                       const Vector& b) {
  return 0.5 * b.dot(G * b) - c.dot(b) + lambda * b.lpNorm<1>();
}

Vector column_scales(const Matrix& X) {
  return (X.colwise().squaredNorm() / static_cast<double>(X.rows())).cwiseSqrt().transpose();
}

}  // namespace

Vector lasso_gram(const Matrix& G, const Vector& c, double lambda, const LassoOptions& options) {
  const Index p = c.size();
  if (G.rows() != p || G.cols() != p) throw ShapeError("lasso_gram: G and c disagree");
  if (!G.allFinite() || !c.allFinite() || std::isnan(lambda) || lambda < 0.0) {
    throw DomainError("lasso_gram: non-finite inputs or negative penalty");
  }
  Vector b = Vector::Zero(p);
  if (std::isinf(lambda)) return b;
  // grad = c - G b, maintained incrementally.
  Vector grad = c;
#ifndef NDEBUG
  double previous = gram_objective(G, c, lambda, b);
#endif
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Index j = 0; j < p; ++j) {
      const double gjj = G(j, j);
      if (!(gjj > 0.0)) continue;
      const double old = b(j);
      const double updated = soft_threshold(grad(j) + gjj * old, lambda) / gjj;
      const double delta = updated - old;
      if (delta != 0.0) {
        b(j) = updated;
        grad.noalias() -= delta * G.col(j);
        max_change = std::max(max_change, std::abs(delta));
      }
    }
#ifndef NDEBUG
    const double current = gram_objective(G, c, lambda, b);
    assert(current <= previous + 1e-12 * (1.0 + std::abs(previous)));
    previous = current;
#endif
    if (max_change < options.tol) return b;
  }
  throw LassoNonConvergence(b, options.max_sweeps);
}

Vector lasso_cd(const Matrix& X, const Vector& y, double lambda, const LassoOptions& options) {
  if (X.rows() < 1) throw DomainError("lasso_cd: need at least one observation");
  if (y.size() != X.rows()) throw ShapeError("lasso_cd: X and y disagree");
  if (!X.allFinite() || !y.allFinite()) throw DomainError("lasso_cd: non-finite inputs");
  const double N = static_cast<double>(X.rows());
  const Vector s = column_scales(X);
  const Vector inv_s = s.unaryExpr([](double v) { return v > 0.0 ? 1.0 / v : 0.0; });
  const Matrix Xs = X * inv_s.asDiagonal();
  const Matrix G = Xs.transpose() * Xs / N;
  const Vector c = Xs.transpose() * y / N;
  try {
    return lasso_gram(G, c, lambda, options).cwiseProduct(inv_s);
  } catch (const LassoNonConvergence& e) {
    throw LassoNonConvergence(e.last_iterate().cwiseProduct(inv_s), options.max_sweeps);
  }
}

double lasso_objective(const Matrix& X, const Vector& y, double lambda, const Vector& beta) {
  const Vector s = column_scales(X);
  const Vector scaled = beta.cwiseProduct(s);
  const double N = static_cast<double>(X.rows());
  return (y - X * beta).squaredNorm() / (2.0 * N) + lambda * scaled.lpNorm<1>();
}

}  // namespace tsera
