#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstddef>
#include <cstring>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wattspell/core/error.hpp"

namespace wspl {

using Shape = std::vector<std::size_t>;

inline std::string shape_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

inline std::size_t shape_product(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using ColVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Dense row-major n-dimensional array.
///
/// A default-constructed tensor is empty (rank 0, no elements). Every other
/// tensor has strictly positive dimensions and exactly product(shape)
/// elements. Two- and three-dimensional views are exposed as Eigen maps so
/// the layer kernels can use Eigen expressions directly on the storage.
template <typename Scalar>
class Tensor {
 public:
  using value_type = Scalar;
  using MatrixMap = Eigen::Map<RowMatrix<Scalar>>;
  using ConstMatrixMap = Eigen::Map<const RowMatrix<Scalar>>;
  using VectorMap = Eigen::Map<ColVector<Scalar>>;
  using ConstVectorMap = Eigen::Map<const ColVector<Scalar>>;

  Tensor() = default;

  explicit Tensor(Shape shape, Scalar fill = Scalar(0)) : shape_(std::move(shape)) {
    check_shape(shape_);
    data_.assign(shape_product(shape_), fill);
  }

  Tensor(Shape shape, const std::vector<Scalar>& data) : shape_(std::move(shape)), data_(data.begin(), data.end()) {
    check_shape(shape_);
    if (data_.size() != shape_product(shape_)) {
      throw ShapeError("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                       shape_string(shape_));
    }
  }

  static Tensor zeros(Shape shape) { return Tensor(std::move(shape)); }

  static Tensor identity(std::size_t n) {
    Tensor t({n, n});
    for (std::size_t i = 0; i < n; ++i) t(i, i) = Scalar(1);
    return t;
  }

  /// 1-D tensor from a literal list.
  static Tensor vector(std::initializer_list<Scalar> values) {
    return Tensor({values.size()}, std::vector<Scalar>(values));
  }

  /// 2-D tensor from nested row literals.
  static Tensor matrix(std::initializer_list<std::initializer_list<Scalar>> rows) {
    const std::size_t cols = rows.size() ? rows.begin()->size() : 0;
    std::vector<Scalar> data;
    for (const auto& row : rows) {
      if (row.size() != cols) throw ShapeError("ragged matrix literal");
      data.insert(data.end(), row.begin(), row.end());
    }
    return Tensor({rows.size(), cols}, std::move(data));
  }

  /// Copies an Eigen matrix expression into a rank-2 tensor.
  template <typename Derived>
  static Tensor from_eigen(const Eigen::MatrixBase<Derived>& m) {
    Tensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
    t.matrix() = m;
    return t;
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t dim(std::size_t axis) const {
    if (axis >= shape_.size()) throw ShapeError("axis " + std::to_string(axis) + " out of range for " + shape_string(shape_));
    return shape_[axis];
  }

  Scalar* data() noexcept { return data_.data(); }
  const Scalar* data() const noexcept { return data_.data(); }
  std::span<Scalar> values() noexcept { return data_; }
  std::span<const Scalar> values() const noexcept { return data_; }

  Scalar& operator[](std::size_t i) { return data_[i]; }
  const Scalar& operator[](std::size_t i) const { return data_[i]; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }

  Scalar& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  const Scalar& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  /// View as dim(0) x (size / dim(0)); a rank-1 tensor is a 1 x n row.
  MatrixMap matrix() {
    const auto [r, c] = matrix_dims();
    return MatrixMap(data_.data(), r, c);
  }
  ConstMatrixMap matrix() const {
    const auto [r, c] = matrix_dims();
    return ConstMatrixMap(data_.data(), r, c);
  }

  /// View as an explicit rows x cols matrix over the same storage.
  MatrixMap matrix(std::size_t rows, std::size_t cols) {
    check_view(rows * cols);
    return MatrixMap(data_.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  }
  ConstMatrixMap matrix(std::size_t rows, std::size_t cols) const {
    check_view(rows * cols);
    return ConstMatrixMap(data_.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  }

  VectorMap vec() { return VectorMap(data_.data(), static_cast<Eigen::Index>(data_.size())); }
  ConstVectorMap vec() const { return ConstVectorMap(data_.data(), static_cast<Eigen::Index>(data_.size())); }

  /// Leading-index slab of a rank-3 tensor [A x B x C] as a B x C matrix.
  MatrixMap slab(std::size_t i) {
    return MatrixMap(data_.data() + i * shape_[1] * shape_[2], static_cast<Eigen::Index>(shape_[1]),
                     static_cast<Eigen::Index>(shape_[2]));
  }
  ConstMatrixMap slab(std::size_t i) const {
    return ConstMatrixMap(data_.data() + i * shape_[1] * shape_[2], static_cast<Eigen::Index>(shape_[1]),
                          static_cast<Eigen::Index>(shape_[2]));
  }

  /// Same data under a new shape with the same element count.
  Tensor reshaped(Shape shape) const& {
    Tensor out = *this;
    out.reshape(std::move(shape));
    return out;
  }
  Tensor reshaped(Shape shape) && {
    reshape(std::move(shape));
    return std::move(*this);
  }
  void reshape(Shape shape) {
    check_shape(shape);
    if (shape_product(shape) != data_.size()) {
      throw ShapeError("cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
    }
    shape_ = std::move(shape);
  }

  void fill(Scalar value) { std::fill(data_.begin(), data_.end(), value); }

  /// Zeroed tensor with this tensor's shape.
  Tensor zeros_like() const { return empty() ? Tensor() : Tensor(shape_); }

  /// Bitwise equality of shape and every element.
  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape_ == b.shape_ &&
           (a.data_.empty() || std::memcmp(a.data_.data(), b.data_.data(), a.data_.size() * sizeof(Scalar)) == 0);
  }

 private:
  static void check_shape(const Shape& shape) {
    if (shape.empty()) throw ShapeError("tensor shape must have at least one dimension");
    for (std::size_t d : shape) {
      if (d == 0) throw ShapeError("tensor dimensions must be positive, got " + shape_string(shape));
    }
  }

  std::pair<Eigen::Index, Eigen::Index> matrix_dims() const {
    if (shape_.empty()) return {0, 0};
    if (shape_.size() == 1) return {1, static_cast<Eigen::Index>(shape_[0])};
    return {static_cast<Eigen::Index>(shape_[0]), static_cast<Eigen::Index>(data_.size() / shape_[0])};
  }

  void check_view(std::size_t n) const {
    if (n != data_.size()) throw ShapeError("matrix view of " + std::to_string(n) + " elements over " + shape_string(shape_));
  }

  Shape shape_;
  // Eigen picks vectorized code paths from the runtime alignment of a map,
  // so unaligned storage would make results depend on heap addresses.
  std::vector<Scalar, Eigen::aligned_allocator<Scalar>> data_;
};

/// Copy of leading-axis entries [begin, end).
template <typename Scalar>
Tensor<Scalar> slice_rows(const Tensor<Scalar>& t, std::size_t begin, std::size_t end) {
  if (t.rank() == 0 || begin >= end || end > t.dim(0)) {
    throw ShapeError("slice_rows [" + std::to_string(begin) + ", " + std::to_string(end) + ") out of range for " +
                     shape_string(t.shape()));
  }
  const std::size_t stride = t.size() / t.dim(0);
  Shape shape = t.shape();
  shape[0] = end - begin;
  return Tensor<Scalar>(std::move(shape), std::vector<Scalar>(t.data() + begin * stride, t.data() + end * stride));
}

}  // namespace wspl
