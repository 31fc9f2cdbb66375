// include/mcmask/tensor.hpp

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

#ifndef MCMASK_TENSOR_HPP
#define MCMASK_TENSOR_HPP

#include <span>
#include <string>
#include <vector>

#include "mcmask/errors.hpp"

namespace mcmask {

// Dense row-major tensor of 64-bit floats. Effectively 1-D or 2-D everywhere
// in this codebase; the shape vector keeps the interface uniform.
//
// Invariant: every value is finite. Kernels verify their outputs and raise
// NumericError on NaN/Inf.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape);  // zero-filled
  Tensor(std::vector<int> shape, std::vector<double> data);

  static Tensor scalar(double value);
  static Tensor zeros(std::vector<int> shape);
  static Tensor ones(std::vector<int> shape);
  static Tensor full(std::vector<int> shape, double value);
  static Tensor identity(int n);

  const std::vector<int>& shape() const { return shape_; }
  int ndim() const { return static_cast<int>(shape_.size()); }
  int size() const { return static_cast<int>(data_.size()); }
  bool defined() const { return !shape_.empty(); }

  // 2-D accessors; throw ShapeError when the tensor is not a matrix.
  int rows() const;
  int cols() const;

  double& operator()(int i) { return data_[static_cast<size_t>(i)]; }
  double operator()(int i) const { return data_[static_cast<size_t>(i)]; }
  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  std::string shape_str() const;

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
  int cols_ = 0;  // cached for 2-D indexing
};

// ---- kernels ---------------------------------------------------------------
// Shared by the inference modules and the autodiff graph so that both paths
// produce bit-identical values.

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor ewise_mul(const Tensor& a, const Tensor& b);
Tensor ewise_add(const Tensor& a, const Tensor& b);
Tensor ewise_sub(const Tensor& a, const Tensor& b);
// y = x for x >= 0, alpha * x otherwise.
Tensor prelu(const Tensor& x, double alpha);
Tensor scale(const Tensor& x, double s);
Tensor transpose(const Tensor& a);

double sum_squares(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);

// Throws NumericError naming `context` if any value is NaN/Inf.
void require_finite(const Tensor& t, const char* context);
void require_finite(std::span<const double> x, const char* context);

}  // namespace mcmask

#endif  // MCMASK_TENSOR_HPP
