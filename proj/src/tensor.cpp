// src/tensor.cpp

// Copyright 2026  The mcmask authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mcmask/tensor.hpp"

#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>

namespace mcmask {

namespace {

size_t checked_size(const std::vector<int>& shape) {
  size_t total = 1;
  for (int d : shape) {
    if (d < 0) throw ShapeError("tensor dimension must be non-negative");
    total *= static_cast<size_t>(d);
  }
  return total;
}

}  // namespace

Tensor::Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
  data_.assign(checked_size(shape_), 0.0);
  cols_ = shape_.size() == 2 ? shape_[1] : 0;
}

Tensor::Tensor(std::vector<int> shape, std::vector<double> data) : shape_(std::move(shape)) {
  if (checked_size(shape_) != data.size())
    throw ShapeError("tensor data length does not match shape");
  data_ = std::move(data);
  cols_ = shape_.size() == 2 ? shape_[1] : 0;
}

Tensor Tensor::scalar(double value) { return Tensor({1}, {value}); }

Tensor Tensor::zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }

Tensor Tensor::ones(std::vector<int> shape) { return full(std::move(shape), 1.0); }

Tensor Tensor::full(std::vector<int> shape, double value) {
  Tensor t(std::move(shape));
  for (double& v : t.data_) v = value;
  return t;
}

Tensor Tensor::identity(int n) {
  Tensor t({n, n});
  for (int i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

int Tensor::rows() const {
  if (ndim() != 2) throw ShapeError("rows(): tensor is not 2-D, shape " + shape_str());
  return shape_[0];
}

int Tensor::cols() const {
  if (ndim() != 2) throw ShapeError("cols(): tensor is not 2-D, shape " + shape_str());
  return shape_[1];
}

std::string Tensor::shape_str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < shape_.size(); ++i) os << (i ? "x" : "") << shape_[i];
  os << "]";
  return os.str();
}

void require_finite(std::span<const double> x, const char* context) {
  for (double v : x) {
    if (!std::isfinite(v))
      throw NumericError(std::string("non-finite value in ") + context);
  }
}

void require_finite(const Tensor& t, const char* context) { require_finite(t.data(), context); }

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.ndim() != 2 || b.ndim() != 2)
    throw ShapeError("matmul: operands must be 2-D, got " + a.shape_str() + " and " + b.shape_str());
  if (a.cols() != b.rows())
    throw ShapeError("matmul: inner dimensions disagree, " + a.shape_str() + " by " + b.shape_str());
  const int p = a.rows(), q = a.cols(), r = b.cols();
  Tensor out({p, r});
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  double* pc = out.data().data();
  // i-k-j order: unit-stride inner loop, deterministic ascending-k accumulation.
  for (int i = 0; i < p; ++i) {
    const double* arow = pa + static_cast<size_t>(i) * q;
    double* crow = pc + static_cast<size_t>(i) * r;
    for (int k = 0; k < q; ++k) {
      const double aik = arow[k];
      const double* brow = pb + static_cast<size_t>(k) * r;
      for (int j = 0; j < r; ++j) crow[j] += aik * brow[j];
    }
  }
  require_finite(out, "matmul");
  return out;
}

namespace {

template <class F>
Tensor binary_op(const Tensor& a, const Tensor& b, F f, const char* name) {
  if (!a.same_shape(b))
    throw ShapeError(std::string(name) + ": shapes disagree, " + a.shape_str() + " vs " + b.shape_str());
  Tensor out(a.shape());
  auto pa = a.data(), pb = b.data();
  auto po = out.data();
  for (int i = 0; i < a.size(); ++i) po[i] = f(pa[i], pb[i]);
  require_finite(out, name);
  return out;
}

}  // namespace

Tensor ewise_mul(const Tensor& a, const Tensor& b) {
  return binary_op(a, b, [](double x, double y) { return x * y; }, "ewise_mul");
}

Tensor ewise_add(const Tensor& a, const Tensor& b) {
  return binary_op(a, b, [](double x, double y) { return x + y; }, "ewise_add");
}

Tensor ewise_sub(const Tensor& a, const Tensor& b) {
  return binary_op(a, b, [](double x, double y) { return x - y; }, "ewise_sub");
}

Tensor prelu(const Tensor& x, double alpha) {
  Tensor out(x.shape());
  auto px = x.data();
  auto po = out.data();
  for (int i = 0; i < x.size(); ++i) po[i] = px[i] >= 0.0 ? px[i] : alpha * px[i];
  require_finite(out, "prelu");
  return out;
}

Tensor scale(const Tensor& x, double s) {
  Tensor out(x.shape());
  auto px = x.data();
  auto po = out.data();
  for (int i = 0; i < x.size(); ++i) po[i] = s * px[i];
  require_finite(out, "scale");
  return out;
}

Tensor transpose(const Tensor& a) {
  const int r = a.rows(), c = a.cols();
  Tensor out({c, r});
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) out(j, i) = a(i, j);
  return out;
}

double sum_squares(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace mcmask
