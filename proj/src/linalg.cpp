#include "tsera/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tsera {

Matrix centering_rotation(Index n) {
  if (n < 2) throw DomainError("centering rotation needs n >= 2, got " + std::to_string(n));
  Matrix Q = Matrix::Zero(n, n);
  for (Index r = 1; r < n; ++r) {
    const double s = 1.0 / std::sqrt(static_cast<double>(r * (r + 1)));
    Q.row(r - 1).head(r).setConstant(s);
    Q(r - 1, r) = -static_cast<double>(r) * s;
  }
  Q.row(n - 1).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  return Q;
}

InvSqrtResult sym_inv_sqrt(const Matrix& M, double floor_ratio) {
  if (M.rows() != M.cols()) throw ShapeError("sym_inv_sqrt: matrix is not square");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
  if (eig.info() != Eigen::Success) throw NumericalError("sym_inv_sqrt: eigendecomposition failed");
  Vector lambda = eig.eigenvalues();
  const double lmax = lambda.maxCoeff();
  if (!(lmax > 0.0)) throw DomainError("sym_inv_sqrt: matrix is not positive definite");
  const double floor = floor_ratio * lmax;
  InvSqrtResult out;
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < floor) {
      lambda(i) = floor;
      ++out.clamped;
    }
  }
  out.warning = static_cast<double>(out.clamped) > 0.01 * static_cast<double>(lambda.size());
  const Matrix& V = eig.eigenvectors();
  out.value = V * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
  out.value = 0.5 * (out.value + out.value.transpose());
  return out;
}

Matrix sym_sqrt(const Matrix& M) {
  if (M.rows() != M.cols()) throw ShapeError("sym_sqrt: matrix is not square");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
  if (eig.info() != Eigen::Success) throw NumericalError("sym_sqrt: eigendecomposition failed");
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw DomainError("sym_sqrt: matrix is not positive definite (min eigenvalue " +
                      std::to_string(eig.eigenvalues().minCoeff()) + ")");
  }
  const Matrix& V = eig.eigenvectors();
  Matrix out = V * eig.eigenvalues().cwiseSqrt().asDiagonal() * V.transpose();
  return 0.5 * (out + out.transpose());
}

Matrix pooled_mode_covariance(const std::vector<Tensor>& group, Index k) {
  if (group.empty()) throw DomainError("pooled_mode_covariance: empty group");
  const Index n = static_cast<Index>(group.size());
  if (n < 2) throw DegenerateError("pooled_mode_covariance: centering a single observation");
  const auto& shape = group.front().shape();
  group.front().check_mode(k);

  Tensor mean(shape);
  for (const auto& y : group) {
    if (y.shape() != shape) throw ShapeError("pooled_mode_covariance: shapes differ");
    mean = mean + y;
  }
  mean = mean * (1.0 / static_cast<double>(n));

  const Index mk = shape[static_cast<std::size_t>(k)];
  Matrix S = Matrix::Zero(mk, mk);
  for (const auto& y : group) {
    const Matrix X = matricize(y - mean, k);
    S.selfadjointView<Eigen::Lower>().rankUpdate(X);
  }
  S = S.selfadjointView<Eigen::Lower>();
  const double fibers = static_cast<double>(n) * static_cast<double>(group.front().size() / mk);
  S /= fibers;
  double scale = 0.0;
  for (const auto& t : group)
    for (double v : t.data()) scale = std::max(scale, v * v);
  // rounding residue of centering identical observations is O(eps^2 scale)
  const double eps = 64.0 * std::numeric_limits<double>::epsilon();
  if (S.cwiseAbs().maxCoeff() <= eps * eps * scale) {
    throw DegenerateError("pooled_mode_covariance: all observations identical after centering");
  }
  return S;
}

Matrix normalize_diagonal(const Matrix& A) {
  const Vector d = A.diagonal().cwiseSqrt().cwiseInverse();
  return d.asDiagonal() * A * d.asDiagonal();
}

double min_eigenvalue(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace tsera
