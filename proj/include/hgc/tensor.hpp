// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hgc/mac_counter.hpp"

namespace hgc {

class Rng;

// Dense row-major array of doubles. Every operation in this header checks its
// result for NaN/Inf and throws NumericError if one appears.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape);
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor zeros(std::size_t rows, std::size_t cols);
  static Tensor identity(std::size_t n);
  static Tensor uniform(std::size_t rows, std::size_t cols, Rng& rng, double lo, double hi);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  // Matrix views; require rank 2.
  std::size_t rows() const;
  std::size_t cols() const;
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  std::string shape_str() const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

// Same shape and same bit patterns element by element.
bool bit_equal(const Tensor& a, const Tensor& b);

// a[m x k] * b[k x n]; charges m*k*n MACs to `tag`.
Tensor matmul(const Tensor& a, const Tensor& b, MacCounter& counter, const MacTag& tag);

Tensor transpose(const Tensor& a);
Tensor softmax_rows(const Tensor& x);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor relu(const Tensor& a);
// [a | b] along the last dimension; row counts must agree.
Tensor concat_cols(const Tensor& a, const Tensor& b);

double norm(const Tensor& a);
double dot(const Tensor& a, const Tensor& b);
// Cosine of the flattened operands. Throws DegenerateInputError on a
// zero-norm operand and ShapeError when element counts differ.
double cosine_flat(const Tensor& a, const Tensor& b);

}  // namespace hgc
