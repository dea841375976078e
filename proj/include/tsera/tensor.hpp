#pragma once

#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tsera/error.hpp"

namespace tsera {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// K-th order dense array. Elements are stored with the LAST index varying
/// fastest, so element (i_0, ..., i_{K-1}) lives at
/// sum_k i_k * prod_{k' > k} m_{k'}. Modes are 0-based.
template <typename Scalar>
class DenseTensor {
 public:
  using Shape = std::vector<Index>;
  using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  DenseTensor() = default;

  explicit DenseTensor(Shape shape) : shape_(std::move(shape)) {
    validate_shape(shape_);
    data_.assign(static_cast<std::size_t>(product(shape_)), Scalar(0));
  }

  DenseTensor(Shape shape, std::vector<Scalar> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    validate_shape(shape_);
    if (static_cast<Index>(data_.size()) != product(shape_)) {
      throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                       " does not match shape product " + std::to_string(product(shape_)));
    }
  }

  Index order() const { return static_cast<Index>(shape_.size()); }
  Index dim(Index k) const {
    check_mode(k);
    return shape_[static_cast<std::size_t>(k)];
  }
  Index size() const { return static_cast<Index>(data_.size()); }
  const Shape& shape() const { return shape_; }

  std::span<const Scalar> data() const { return data_; }
  std::span<Scalar> data() { return data_; }

  Index offset(std::span<const Index> idx) const {
    if (static_cast<Index>(idx.size()) != order()) {
      throw IndexError("expected " + std::to_string(order()) + " indices, got " +
                       std::to_string(idx.size()));
    }
    Index off = 0;
    for (std::size_t k = 0; k < shape_.size(); ++k) {
      if (idx[k] < 0 || idx[k] >= shape_[k]) {
        throw IndexError("index " + std::to_string(idx[k]) + " out of range for mode " +
                         std::to_string(k) + " of size " + std::to_string(shape_[k]));
      }
      off = off * shape_[k] + idx[k];
    }
    return off;
  }

  Scalar operator()(std::span<const Index> idx) const { return data_[offset(idx)]; }
  Scalar& operator()(std::span<const Index> idx) { return data_[offset(idx)]; }
  Scalar at(std::initializer_list<Index> idx) const {
    return (*this)(std::span<const Index>(idx.begin(), idx.size()));
  }

  /// Number of entries before mode k (product of leading dims) and after it.
  Index leading(Index k) const {
    check_mode(k);
    return product(std::span<const Index>(shape_.data(), static_cast<std::size_t>(k)));
  }
  Index trailing(Index k) const {
    check_mode(k);
    return product(std::span<const Index>(shape_.data() + k + 1, shape_.size() - k - 1));
  }

  void check_mode(Index k) const {
    if (k < 0 || k >= order()) {
      throw IndexError("mode " + std::to_string(k) + " invalid for order-" +
                       std::to_string(order()) + " tensor");
    }
  }

  DenseTensor operator*(Scalar c) const {
    DenseTensor out = *this;
    for (auto& v : out.data_) v *= c;
    return out;
  }
  DenseTensor operator+(const DenseTensor& other) const {
    require_same_shape(other);
    DenseTensor out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
    return out;
  }
  DenseTensor operator-(const DenseTensor& other) const {
    require_same_shape(other);
    DenseTensor out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
    return out;
  }

  bool operator==(const DenseTensor&) const = default;

  static Index product(std::span<const Index> dims) {
    return std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
  }

 private:
  static void validate_shape(const Shape& s) {
    if (s.empty()) throw ShapeError("tensor order must be at least 1");
    for (Index m : s) {
      if (m < 1) throw ShapeError("tensor dimensions must be positive");
    }
  }
  void require_same_shape(const DenseTensor& other) const {
    if (shape_ != other.shape_) throw ShapeError("tensor shapes differ");
  }

  Shape shape_;
  std::vector<Scalar> data_;
};

using Tensor = DenseTensor<double>;

namespace detail {

// Row-major view of the (m_k x trailing) block for leading index l.
template <typename Scalar>
using ConstBlockMap =
    Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
template <typename Scalar>
using BlockMap = Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

}  // namespace detail

/// Mode-k fiber. `fixed` holds the K-1 indices of the other modes in
/// increasing mode order.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> fiber(const DenseTensor<Scalar>& t, Index k,
                                               std::span<const Index> fixed) {
  t.check_mode(k);
  if (static_cast<Index>(fixed.size()) != t.order() - 1) {
    throw IndexError("fiber needs " + std::to_string(t.order() - 1) + " fixed indices");
  }
  std::vector<Index> idx(static_cast<std::size_t>(t.order()));
  for (Index q = 0, f = 0; q < t.order(); ++q) {
    if (q == k) continue;
    idx[static_cast<std::size_t>(q)] = fixed[static_cast<std::size_t>(f++)];
  }
  idx[static_cast<std::size_t>(k)] = 0;
  const Index base = t.offset(idx);
  const Index stride = t.trailing(k);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(t.dim(k));
  for (Index i = 0; i < t.dim(k); ++i) out(i) = t.data()[base + i * stride];
  return out;
}

/// Mode-k unfolding: m_k x (m / m_k). Columns enumerate the remaining indices
/// lexicographically, last remaining index fastest.
template <typename Scalar>
typename DenseTensor<Scalar>::MatrixType matricize(const DenseTensor<Scalar>& t, Index k) {
  t.check_mode(k);
  const Index lead = t.leading(k), mk = t.dim(k), trail = t.trailing(k);
  typename DenseTensor<Scalar>::MatrixType out(mk, lead * trail);
  for (Index l = 0; l < lead; ++l) {
    detail::ConstBlockMap<Scalar> block(t.data().data() + l * mk * trail, mk, trail);
    out.middleCols(l * trail, trail) = block;
  }
  return out;
}

/// Inverse of matricize for a target shape.
template <typename Scalar, typename Derived>
DenseTensor<Scalar> fold(const Eigen::MatrixBase<Derived>& unfolded, Index k,
                         typename DenseTensor<Scalar>::Shape shape) {
  DenseTensor<Scalar> out(std::move(shape));
  out.check_mode(k);
  const Index lead = out.leading(k), mk = out.dim(k), trail = out.trailing(k);
  if (unfolded.rows() != mk || unfolded.cols() != lead * trail) {
    throw ShapeError("unfolded matrix does not match target shape");
  }
  for (Index l = 0; l < lead; ++l) {
    detail::BlockMap<Scalar> block(out.data().data() + l * mk * trail, mk, trail);
    block = unfolded.middleCols(l * trail, trail);
  }
  return out;
}

/// k-mode product t x_k A with A of size J x m_k:
/// out[..., j, ...] = sum_i t[..., i, ...] * A(j, i).
template <typename Scalar, typename Derived>
DenseTensor<Scalar> mode_product(const DenseTensor<Scalar>& t, Index k,
                                 const Eigen::MatrixBase<Derived>& A) {
  t.check_mode(k);
  if (A.cols() != t.dim(k)) {
    throw ShapeError("mode_product: matrix has " + std::to_string(A.cols()) +
                     " columns, mode " + std::to_string(k) + " has size " +
                     std::to_string(t.dim(k)));
  }
  auto shape = t.shape();
  shape[static_cast<std::size_t>(k)] = A.rows();
  DenseTensor<Scalar> out(shape);
  const Index lead = t.leading(k), mk = t.dim(k), trail = t.trailing(k), J = A.rows();
  for (Index l = 0; l < lead; ++l) {
    detail::ConstBlockMap<Scalar> in(t.data().data() + l * mk * trail, mk, trail);
    detail::BlockMap<Scalar> res(out.data().data() + l * J * trail, J, trail);
    res.noalias() = A * in;
  }
  return out;
}

/// Tucker product t x_0 A_0 x_1 A_1 ... applied left to right; an empty
/// optional stands for the identity on that mode.
template <typename Scalar>
DenseTensor<Scalar> tucker(
    const DenseTensor<Scalar>& t,
    const std::vector<std::optional<typename DenseTensor<Scalar>::MatrixType>>& mats) {
  if (static_cast<Index>(mats.size()) != t.order()) {
    throw ShapeError("tucker: expected " + std::to_string(t.order()) + " matrices, got " +
                     std::to_string(mats.size()));
  }
  DenseTensor<Scalar> out = t;
  for (Index k = 0; k < t.order(); ++k) {
    const auto& A = mats[static_cast<std::size_t>(k)];
    if (A) out = mode_product(out, k, *A);
  }
  return out;
}

/// Stack n same-shaped tensors into an order-(K+1) tensor whose last mode
/// indexes the observations.
template <typename Scalar>
DenseTensor<Scalar> stack(const std::vector<DenseTensor<Scalar>>& obs) {
  if (obs.empty()) throw ShapeError("stack: need at least one observation");
  const auto& first = obs.front().shape();
  for (const auto& o : obs) {
    if (o.shape() != first) throw ShapeError("stack: observations have different shapes");
  }
  const Index n = static_cast<Index>(obs.size());
  const Index m = obs.front().size();
  auto shape = first;
  shape.push_back(n);
  DenseTensor<Scalar> out(shape);
  auto dst = out.data();
  for (Index l = 0; l < n; ++l) {
    auto src = obs[static_cast<std::size_t>(l)].data();
    for (Index e = 0; e < m; ++e) dst[e * n + l] = src[e];
  }
  return out;
}

/// Slice l of the last mode (inverse of stack).
template <typename Scalar>
DenseTensor<Scalar> slice_last(const DenseTensor<Scalar>& t, Index l) {
  if (t.order() < 2) throw ShapeError("slice_last: tensor order must be at least 2");
  const Index n = t.shape().back();
  if (l < 0 || l >= n) throw IndexError("slice index out of range");
  auto shape = t.shape();
  shape.pop_back();
  DenseTensor<Scalar> out(shape);
  auto src = t.data();
  auto dst = out.data();
  for (Index e = 0; e < out.size(); ++e) dst[e] = src[e * n + l];
  return out;
}

template <typename Scalar>
std::vector<DenseTensor<Scalar>> unstack(const DenseTensor<Scalar>& t) {
  std::vector<DenseTensor<Scalar>> out;
  const Index n = t.shape().back();
  out.reserve(static_cast<std::size_t>(n));
  for (Index l = 0; l < n; ++l) out.push_back(slice_last(t, l));
  return out;
}

}  // namespace tsera
