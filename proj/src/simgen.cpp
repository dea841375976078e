#include "tsera/simgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "tsera/hypotheses.hpp"
#include "tsera/linalg.hpp"

namespace tsera {

namespace {

double fraction_from_digits(std::string_view digits) {
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
    throw DomainError("bad AR rate digits '" + std::string(digits) + "'");
  }
  return std::stod("0." + std::string(digits));
}

void pd_shift(Matrix& P) {
  P.diagonal().array() += std::abs(min_eigenvalue(P)) + 0.05;
}

}  // namespace

StructureModel StructureModel::parse(std::string_view name) {
  StructureModel out;
  if (name.starts_with("split:")) {
    out = parse(name.substr(6));
    if (out.split) throw DomainError("nested split structure");
    out.split = true;
    return out;
  }
  if (name == "identity") {
    out.kind = StructureKind::Identity;
  } else if (name == "band") {
    out.kind = StructureKind::Band;
  } else if (name == "hub") {
    out.kind = StructureKind::Hub;
  } else if (name == "random") {
    out.kind = StructureKind::Random;
  } else if (name.starts_with("ar")) {
    out.kind = StructureKind::AR;
    out.ar_rate = fraction_from_digits(name.substr(2));
  } else if (name.starts_with("ma")) {
    out.kind = StructureKind::MA;
    auto digits = name.substr(2);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out.ma_lag);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      throw DomainError("bad MA lag in '" + std::string(name) + "'");
    }
  } else {
    throw DomainError("unknown structure '" + std::string(name) + "'");
  }
  out.validate();
  return out;
}

std::string StructureModel::name() const {
  std::string base;
  switch (kind) {
    case StructureKind::Identity: base = "identity"; break;
    case StructureKind::Band: base = "band"; break;
    case StructureKind::Hub: base = "hub"; break;
    case StructureKind::Random: base = "random"; break;
    case StructureKind::AR: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.15g", ar_rate);
      base = std::string("ar") + (buf + 2);  // drop the leading "0."
      break;
    }
    case StructureKind::MA: base = "ma" + std::to_string(ma_lag); break;
  }
  return split ? "split:" + base : base;
}

void StructureModel::validate() const {
  if (kind == StructureKind::AR && !(ar_rate > 0.0 && ar_rate < 1.0)) {
    throw DomainError("AR rate must lie in (0,1)");
  }
  if (kind == StructureKind::MA && ma_lag < 1) throw DomainError("MA lag must be >= 1");
}

Index GroundTruth::signals() const {
  return static_cast<Index>(std::count(mask.begin(), mask.end(), true));
}

Matrix gen_structure(const StructureModel& model, Index m, Rng& rng, bool pd_fix) {
  model.validate();
  if (m < 2) throw DomainError("structure dimension must be >= 2");
  Matrix P = Matrix::Identity(m, m);
  switch (model.kind) {
    case StructureKind::Identity:
      break;
    case StructureKind::Band:
      for (Index i = 0; i < m; ++i) {
        if (i + 1 < m) P(i, i + 1) = P(i + 1, i) = 0.6;
        if (i + 2 < m) P(i, i + 2) = P(i + 2, i) = 0.3;
      }
      break;
    case StructureKind::Hub:
      for (Index hub = 0; hub < m; hub += 10) {
        for (Index j = hub + 1; j < std::min(hub + 10, m); ++j) P(hub, j) = P(j, hub) = 0.5;
      }
      if (pd_fix) pd_shift(P);
      break;
    case StructureKind::Random: {
      const double prob = std::min(0.05, 10.0 / static_cast<double>(m));
      std::uniform_real_distribution<double> unif(0.4, 0.8);
      std::bernoulli_distribution coin(prob);
      for (Index i = 0; i < m; ++i) {
        for (Index j = i + 1; j < m; ++j) {
          const double u = unif(rng);
          if (coin(rng)) P(i, j) = P(j, i) = u;
        }
      }
      if (pd_fix) pd_shift(P);
      break;
    }
    case StructureKind::AR:
      for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j)
          P(i, j) = std::pow(model.ar_rate, static_cast<double>(std::abs(i - j)));
      break;
    case StructureKind::MA:
      for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < m; ++j) {
          const Index lag = std::abs(i - j);
          if (lag >= 1 && lag <= model.ma_lag) P(i, j) = 1.0 / static_cast<double>(lag + 1);
        }
      }
      break;
  }
  return P;
}

GroundTruth truth_from_targets(const Matrix& first, const Matrix& second, double tol) {
  if (first.rows() != second.rows() || first.rows() != first.cols() ||
      second.rows() != second.cols()) {
    throw ShapeError("truth_from_targets: targets must be square and of equal size");
  }
  const Matrix a = normalize_diagonal(first);
  const Matrix b = normalize_diagonal(second);
  GroundTruth truth{first.rows(), std::vector<bool>(static_cast<std::size_t>(pair_count(first.rows())))};
  Index h = 0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = i + 1; j < a.rows(); ++j)
      truth.mask[static_cast<std::size_t>(h++)] = std::abs(a(i, j) - b(i, j)) > tol;
  return truth;
}

SplitPairResult split_pair(const StructureModel& base, Index m, Rng& rng) {
  StructureModel plain = base;
  plain.split = false;
  const Matrix R = gen_structure(plain, m, rng, /*pd_fix=*/false);

  std::vector<Index> support;
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j)
      if (R(i, j) != 0.0) support.push_back(pair_index(i, j, m));

  std::shuffle(support.begin(), support.end(), rng);
  const std::size_t selected = (support.size() + 1) / 2;
  const std::size_t first_size = (selected + 1) / 2;

  Matrix delta1 = Matrix::Zero(m, m), delta2 = Matrix::Zero(m, m);
  SplitPairResult out;
  out.truth = GroundTruth{m, std::vector<bool>(static_cast<std::size_t>(pair_count(m)))};
  for (std::size_t s = 0; s < selected; ++s) {
    const auto [i, j] = pair_at(support[s], m);
    Matrix& delta = s < first_size ? delta1 : delta2;
    delta(i, j) = delta(j, i) = R(i, j);
    out.truth.mask[static_cast<std::size_t>(support[s])] = true;
  }
  const double varsigma =
      std::abs(std::min(min_eigenvalue(R + delta1), min_eigenvalue(R + delta2)));
  const Matrix shift = (varsigma + 0.05) * Matrix::Identity(m, m);
  out.first = R + delta1 + shift;
  out.second = R + delta2 + shift;
  out.empty_signal = selected == 0;
  return out;
}

ModeDesign ModeDesign::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    auto model = StructureModel::parse(text);
    if (!model.split) {
      throw DomainError("design '" + std::string(text) + "' needs two structures (a/b) or split:<base>");
    }
    return {model, model};
  }
  auto a = StructureModel::parse(text.substr(0, slash));
  auto b = StructureModel::parse(text.substr(slash + 1));
  if (a.split || b.split) throw DomainError("split designs take a single base structure");
  return {a, b};
}

std::string ModeDesign::name() const {
  return first.split ? first.name() : first.name() + "/" + second.name();
}

DesignTargets generate_design(const ModeDesign& design, Index m, Rng& rng) {
  if (design.first.split) {
    auto pair = split_pair(design.first, m, rng);
    return {std::move(pair.first), std::move(pair.second), std::move(pair.truth)};
  }
  DesignTargets out;
  out.first = gen_structure(design.first, m, rng);
  out.second = gen_structure(design.second, m, rng);
  out.truth = truth_from_targets(out.first, out.second);
  return out;
}

std::vector<Tensor> sample_group(const Tensor& mean, const std::vector<Matrix>& sigmas, Index n,
                                 Rng& rng) {
  if (static_cast<Index>(sigmas.size()) != mean.order()) {
    throw ShapeError("sample_group: need one covariance per mode");
  }
  std::vector<std::optional<Matrix>> roots;
  for (Index k = 0; k < mean.order(); ++k) {
    const Matrix& S = sigmas[static_cast<std::size_t>(k)];
    if (S.rows() != mean.dim(k) || S.cols() != mean.dim(k)) {
      throw ShapeError("sample_group: covariance of mode " + std::to_string(k) +
                       " does not match tensor dimension");
    }
    roots.emplace_back(sym_sqrt(S));
  }
  std::normal_distribution<double> normal;
  std::vector<Tensor> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Index l = 0; l < n; ++l) {
    Tensor g(mean.shape());
    for (auto& v : g.data()) v = normal(rng);
    out.push_back(mean + tucker(g, roots));
  }
  return out;
}

Tensor random_mean(const Tensor::Shape& shape, double scale, Rng& rng) {
  std::normal_distribution<double> normal;
  Tensor out(shape);
  for (auto& v : out.data()) v = scale * normal(rng);
  return out;
}

}  // namespace tsera
