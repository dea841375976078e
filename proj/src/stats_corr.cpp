#include "tsera/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsera/hypotheses.hpp"

namespace tsera {

namespace {
constexpr double kVarianceFloor = 1e-15;
}

GroupEstimates corr_estimates(const Matrix& fibers) {
  const Index p = fibers.rows();
  const Index N = fibers.cols();
  if (p < 1 || N < 1) throw DomainError("corr_estimates: no fibers");

  Matrix sigma = Matrix::Zero(p, p);
  sigma.selfadjointView<Eigen::Lower>().rankUpdate(fibers);
  sigma = sigma.selfadjointView<Eigen::Lower>();
  sigma /= static_cast<double>(N);
  for (Index i = 0; i < p; ++i) {
    if (!(sigma(i, i) > 0.0)) {
      throw DegenerateError("corr_estimates: zero variance at coordinate " + std::to_string(i));
    }
  }

  GroupEstimates out;
  out.n_eff = static_cast<double>(N);
  out.rho = sigma;
  out.nu = Matrix::Zero(p, p);
  const Vector inv_sd = sigma.diagonal().cwiseSqrt().cwiseInverse();
  const double n2 = static_cast<double>(N) * static_cast<double>(N);
  const Matrix Xt = fibers.transpose();  // N x p, contiguous columns
  for (Index i = 0; i < p; ++i) {
    out.rho(i, i) = 1.0;
    for (Index j = i + 1; j < p; ++j) {
      const double r = std::clamp(sigma(i, j) * inv_sd(i) * inv_sd(j), -1.0, 1.0);
      out.rho(i, j) = out.rho(j, i) = r;
      const double scatter =
          (Xt.col(i).cwiseProduct(Xt.col(j)).array() - sigma(i, j)).square().sum();
      const double nu = scatter / (n2 * sigma(i, i) * sigma(j, j));
      if (!(nu >= kVarianceFloor)) {
        throw DegenerateError("corr_estimates: zero scatter for pair (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");
      }
      out.nu(i, j) = out.nu(j, i) = nu;
    }
  }
  return out;
}

GroupEstimates corr_estimates(const TransformedGroup& tg) {
  return corr_estimates(pooled_fibers(tg));
}

StatField stat_pairs(const GroupEstimates& g1, const GroupEstimates& g2) {
  const Index m = g1.rho.rows();
  if (g2.rho.rows() != m || g1.nu.rows() != m || g2.nu.rows() != m) {
    throw ShapeError("stat_pairs: group estimates have different sizes");
  }
  StatField out{m, Vector(pair_count(m)), Vector(pair_count(m)), Vector(pair_count(m))};
  Index h = 0;
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j, ++h) {
      const double v1 = g1.nu(i, j), v2 = g2.nu(i, j);
      if (!(v1 > 0.0) || !(v2 > 0.0)) {
        throw DomainError("stat_pairs: non-positive variance at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
      }
      const double r1 = g1.rho(i, j), r2 = g2.rho(i, j);
      const double kappa = v1 / v2;
      out.kappa(h) = kappa;
      out.T(h) = (r1 - r2) / std::sqrt(v1 + v2);
      out.U(h) = (r1 + kappa * r2) / std::sqrt(v1 + kappa * kappa * v2);
    }
  }
  return out;
}

}  // namespace tsera
