#include "tsera/pcorr.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace tsera {

LambdaRule LambdaRule::parse(std::string_view text) {
  auto number = [&](std::string_view s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(std::string(s), &used);
    } catch (const std::exception&) {
      throw DomainError("bad lambda rule '" + std::string(text) + "'");
    }
    if (used != s.size() || std::isnan(v) || !(v > 0.0)) {
      throw DomainError("lambda rule needs a positive number: '" + std::string(text) + "'");
    }
    return v;
  };
  if (text == "auto") return {};
  if (text == "tuned") return {Kind::Tuned, 0.0};
  if (text.starts_with("c=")) {
    const double c = number(text.substr(2));
    if (std::isinf(c)) throw DomainError("lambda constant must be finite");
    return {Kind::Scaled, c};
  }
  return {Kind::Fixed, number(text)};
}

std::string LambdaRule::render() const {
  std::ostringstream os;
  os.precision(17);
  if (kind == Kind::Tuned) {
    os << "tuned";
  } else if (kind == Kind::Scaled) {
    os << "c=" << value;
  } else if (std::isinf(value)) {
    os << "inf";
  } else {
    os << value;
  }
  return os.str();
}

NodewiseFit nodewise_regress(const Matrix& fibers, const LambdaRule& rule,
                             const LassoOptions& options) {
  const Index m = fibers.rows();
  const Index N = fibers.cols();
  if (rule.kind == LambdaRule::Kind::Tuned) {
    throw DomainError("nodewise_regress: a tuned penalty must be resolved with tune_lambda first");
  }
  if (m < 2) throw DomainError("nodewise_regress: need at least two coordinates");
  if (N < 1) throw DomainError("nodewise_regress: no fibers");

  Matrix S = Matrix::Zero(m, m);
  S.selfadjointView<Eigen::Lower>().rankUpdate(fibers);
  S = S.selfadjointView<Eigen::Lower>();
  S /= static_cast<double>(N);
  const Vector scale = S.diagonal().cwiseSqrt();
  if (!(scale.minCoeff() > 0.0)) throw DegenerateError("nodewise_regress: zero-variance coordinate");
  // Correlation-scale Gram shared by every node.
  const Matrix C = scale.cwiseInverse().asDiagonal() * S * scale.cwiseInverse().asDiagonal();

  const double log_ratio = std::sqrt(std::log(static_cast<double>(m)) / static_cast<double>(N));
  NodewiseFit fit{Matrix::Zero(m, m - 1), Vector(m), Matrix(m, N)};
  std::vector<Index> others(static_cast<std::size_t>(m - 1));
  for (Index i = 0; i < m; ++i) {
    for (Index v = 0, q = 0; v < m; ++v)
      if (v != i) others[static_cast<std::size_t>(q++)] = v;

    const double lambda =
        rule.kind == LambdaRule::Kind::Fixed ? rule.value : rule.value * scale(i) * log_ratio;
    fit.lambda(i) = lambda;

    const Matrix G = C(others, others);
    // Standardized design and response; the solution is homogeneous in (c, lambda).
    const Vector c = S(others, i).cwiseQuotient(scale(others)) / scale(i);
    const Vector b = lasso_gram(G, c, lambda / scale(i), options) * scale(i);
    fit.eta.row(i) = b.cwiseQuotient(scale(others)).transpose();
  }
  for (Index i = 0; i < m; ++i) {
    fit.residuals.row(i) = fibers.row(i);
    for (Index v = 0; v < m; ++v) {
      if (v == i) continue;
      const double coef = node_coefficient(fit.eta, i, v);
      if (coef != 0.0) fit.residuals.row(i).noalias() -= coef * fibers.row(v);
    }
  }
  return fit;
}

NodewiseFit nodewise_regress(const TransformedGroup& tg, const LambdaRule& rule,
                             const LassoOptions& options) {
  return nodewise_regress(pooled_fibers(tg), rule, options);
}

PcorrEstimates pcorr_estimates(const NodewiseFit& fit) {
  const Index m = fit.residuals.rows();
  const Index N = fit.residuals.cols();
  if (fit.eta.rows() != m || fit.eta.cols() != m - 1) {
    throw ShapeError("pcorr_estimates: coefficients and residuals disagree");
  }
  PcorrEstimates out;
  out.n_eff = static_cast<double>(N);
  out.r_tilde = Matrix::Zero(m, m);
  out.r_tilde.selfadjointView<Eigen::Lower>().rankUpdate(fit.residuals);
  out.r_tilde = out.r_tilde.selfadjointView<Eigen::Lower>();
  out.r_tilde /= static_cast<double>(N);
  for (Index i = 0; i < m; ++i) {
    if (!(out.r_tilde(i, i) > 0.0)) {
      throw DegenerateError("pcorr_estimates: zero residual variance at node " + std::to_string(i));
    }
  }

  const Matrix& rt = out.r_tilde;
  out.r_hat = rt;
  out.rho = Matrix::Identity(m, m);
  out.nu = Matrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      const double b_ji = node_coefficient(fit.eta, j, i);
      const double b_ij = node_coefficient(fit.eta, i, j);
      const double r = -(rt(i, j) + rt(i, i) * b_ji + rt(j, j) * b_ij);
      out.r_hat(i, j) = out.r_hat(j, i) = r;
      out.rho(i, j) = out.rho(j, i) = r / std::sqrt(rt(i, i) * rt(j, j));
      const double nu = (1.0 + b_ji * b_ji * rt(i, i) / rt(j, j)) / static_cast<double>(N);
      out.nu(i, j) = out.nu(j, i) = nu;
    }
  }
  return out;
}

namespace {

// z with 1 - Phi(z) = q, by bisection on erfc.
double upper_normal_quantile(double q) {
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (0.5 * std::erfc(mid / std::sqrt(2.0)) > q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

LambdaTuning tune_lambda(const Matrix& fibers1, const Matrix& fibers2, const LassoOptions& options) {
  if (fibers1.rows() != fibers2.rows()) throw ShapeError("tune_lambda: groups differ in dimension");
  std::array<double, 10> z{};
  for (int k = 1; k <= 10; ++k) z[static_cast<std::size_t>(k - 1)] = upper_normal_quantile(k / 20.0);

  LambdaTuning out;
  double best = std::numeric_limits<double>::infinity();
  for (int b = 1; b <= 40; ++b) {
    const LambdaRule rule{LambdaRule::Kind::Scaled, b / 20.0};
    const auto g1 = pcorr_estimates(nodewise_regress(fibers1, rule, options)).as_group_estimates();
    const auto g2 = pcorr_estimates(nodewise_regress(fibers2, rule, options)).as_group_estimates();
    const Vector T = stat_pairs(g1, g2).T.cwiseAbs();
    const double M = static_cast<double>(T.size());
    double score = 0.0;
    for (int k = 1; k <= 10; ++k) {
      const double count = static_cast<double>((T.array() >= z[static_cast<std::size_t>(k - 1)]).count());
      const double ratio = count / (k * M / 10.0) - 1.0;
      score += ratio * ratio;
    }
    out.scores.push_back(score);
    if (score < best) {
      best = score;
      out.c = b / 20.0;
    }
  }
  return out;
}

}  // namespace tsera
