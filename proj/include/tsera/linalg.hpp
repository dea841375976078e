#pragma once

#include <vector>

#include "tsera/tensor.hpp"

namespace tsera {

/// Helmert rotation of size n: orthogonal, last row constant 1/sqrt(n), rows
/// 0..n-2 orthogonal to the all-ones vector.
Matrix centering_rotation(Index n);

struct InvSqrtResult {
  Matrix value;
  Index clamped = 0;     // eigenvalues raised to the floor
  bool warning = false;  // clamped more than 1% of the spectrum
};

/// Symmetric inverse square root V diag(lambda)^{-1/2} V^T with eigenvalues
/// floored at floor_ratio * lambda_max.
InvSqrtResult sym_inv_sqrt(const Matrix& M, double floor_ratio = 1e-10);

/// Symmetric square root of an SPD matrix; throws DomainError when any
/// eigenvalue is non-positive.
Matrix sym_sqrt(const Matrix& M);

/// Pooled mode-k sample covariance of a group: subtract the across-sample mean
/// tensor, then average the outer products of all mode-k fibers over
/// n * m / m_k fibers. Identifiable only up to a positive constant.
Matrix pooled_mode_covariance(const std::vector<Tensor>& group, Index k);

/// D^{-1/2} A D^{-1/2}.
Matrix normalize_diagonal(const Matrix& A);

double min_eigenvalue(const Matrix& M);

}  // namespace tsera
