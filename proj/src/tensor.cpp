// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hgc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <numeric>

#include "hgc/error.hpp"
#include "hgc/rng.hpp"

namespace hgc {
namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

void check_shape(const std::vector<std::size_t>& shape) {
  if (shape.empty()) throw ShapeError("tensor: empty shape");
  for (std::size_t d : shape) {
    if (d == 0) throw ShapeError("tensor: zero-sized dimension");
  }
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " +
                     b.shape_str());
  }
}

Tensor checked(Tensor t, const char* op) {
  for (double v : t.data()) {
    if (!std::isfinite(v)) throw NumericError(std::string(op) + ": non-finite result");
  }
  return t;
}

template <typename F>
Tensor map2(const Tensor& a, const Tensor& b, const char* op, F f) {
  require_same_shape(a, b, op);
  Tensor out(a.shape());
  auto x = a.data();
  auto y = b.data();
  auto o = out.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = f(x[i], y[i]);
  return checked(std::move(out), op);
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
  check_shape(shape_);
  data_.assign(product(shape_), 0.0);
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  check_shape(shape_);
  if (data_.size() != product(shape_)) {
    throw ShapeError("tensor: data length " + std::to_string(data_.size()) +
                     " does not match shape " + shape_str());
  }
  checked(*this, "tensor");
}

Tensor Tensor::zeros(std::size_t rows, std::size_t cols) { return Tensor({rows, cols}); }

Tensor Tensor::identity(std::size_t n) {
  Tensor t({n, n});
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

Tensor Tensor::uniform(std::size_t rows, std::size_t cols, Rng& rng, double lo, double hi) {
  Tensor t({rows, cols});
  for (double& v : t.data_) v = rng.next_uniform(lo, hi);
  return t;
}

std::size_t Tensor::rows() const {
  if (shape_.size() != 2) throw ShapeError("tensor: expected rank 2, got " + shape_str());
  return shape_[0];
}

std::size_t Tensor::cols() const {
  if (shape_.size() != 2) throw ShapeError("tensor: expected rank 2, got " + shape_str());
  return shape_[1];
}

std::string Tensor::shape_str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape_[i]);
  }
  return s + "]";
}

bool bit_equal(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) return false;
  return std::memcmp(a.data().data(), b.data().data(), a.size() * sizeof(double)) == 0;
}

Tensor matmul(const Tensor& a, const Tensor& b, MacCounter& counter, const MacTag& tag) {
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  const std::size_t n = b.cols();
  if (b.rows() != k) {
    throw ShapeError("matmul: inner dimensions differ " + a.shape_str() + " * " +
                     b.shape_str());
  }
  Tensor out({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a(i, p);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += av * b(p, j);
    }
  }
  counter.add(tag, static_cast<std::uint64_t>(m) * k * n);
  return checked(std::move(out), "matmul");
}

Tensor transpose(const Tensor& a) {
  Tensor out({a.cols(), a.rows()});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

Tensor softmax_rows(const Tensor& x) {
  Tensor out(x.shape());
  const std::size_t n = x.cols();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double mx = x(i, 0);
    for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, x(i, j));
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      out(i, j) = std::exp(x(i, j) - mx);
      sum += out(i, j);
    }
    for (std::size_t j = 0; j < n; ++j) out(i, j) /= sum;
  }
  return checked(std::move(out), "softmax_rows");
}

Tensor add(const Tensor& a, const Tensor& b) {
  return map2(a, b, "add", [](double x, double y) { return x + y; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return map2(a, b, "sub", [](double x, double y) { return x - y; });
}

Tensor scale(const Tensor& a, double factor) {
  Tensor out = a;
  for (double& v : out.data()) v *= factor;
  return checked(std::move(out), "scale");
}

Tensor relu(const Tensor& a) {
  Tensor out = a;
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  return out;
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows()) {
    throw ShapeError("concat_cols: row counts differ " + a.shape_str() + " vs " +
                     b.shape_str());
  }
  Tensor out({a.rows(), a.cols() + b.cols()});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

double dot(const Tensor& a, const Tensor& b) {
  if (a.size() != b.size()) {
    throw ShapeError("dot: element counts differ " + a.shape_str() + " vs " + b.shape_str());
  }
  double s = 0.0;
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm(const Tensor& a) { return std::sqrt(dot(a, a)); }

double cosine_flat(const Tensor& a, const Tensor& b) {
  if (a.size() != b.size()) {
    throw ShapeError("cosine_flat: element counts differ " + a.shape_str() + " vs " +
                     b.shape_str());
  }
  const double aa = dot(a, a);
  const double bb = dot(b, b);
  if (aa == 0.0 || bb == 0.0) throw DegenerateInputError("cosine_flat: zero-norm operand");
  // sqrt(aa * aa) == aa exactly, so identical operands give exactly 1.
  const double prod = aa * bb;
  const double denom = std::isfinite(prod) ? std::sqrt(prod) : std::sqrt(aa) * std::sqrt(bb);
  const double c = dot(a, b) / denom;
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace hgc
