// tests/test_tensor.cpp

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

#include <doctest.h>

#include <cmath>

#include "mcmask/rng.hpp"
#include "mcmask/tensor.hpp"

using namespace mcmask;

namespace {

Tensor random_tensor(std::vector<int> shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  for (int i = 0; i < t.size(); ++i) t(i) = rng.uniform(lo, hi);
  return t;
}

// Independent brute-force product, entry by entry.
Tensor matmul_oracle(const Tensor& a, const Tensor& b) {
  Tensor out({a.rows(), b.cols()});
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (int k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

}  // namespace

TEST_CASE("matmul identity") {
  Tensor m({2, 2}, {1, 2, 3, 4});
  Tensor out = matmul(Tensor::identity(2), m);
  for (int i = 0; i < 4; ++i) CHECK(out(i) == m(i));
}

TEST_CASE("matmul row by column") {
  Tensor a({1, 2}, {1, 2});
  Tensor b({2, 1}, {3, 4});
  Tensor out = matmul(a, b);
  CHECK(out.size() == 1);
  CHECK(out(0) == doctest::Approx(11.0));
}

TEST_CASE("matmul matches triple-loop oracle") {
  Rng rng(42);
  Tensor a = random_tensor({5, 7}, rng);
  Tensor b = random_tensor({7, 3}, rng);
  Tensor got = matmul(a, b);
  Tensor want = matmul_oracle(a, b);
  double max_diff = 0.0;
  for (int i = 0; i < got.size(); ++i) max_diff = std::max(max_diff, std::fabs(got(i) - want(i)));
  CHECK(max_diff == 0.0);  // same ascending-k accumulation order
}

TEST_CASE("matmul shape mismatch throws") {
  Tensor a({2, 3});
  Tensor b({4, 2});
  CHECK_THROWS_AS(matmul(a, b), ShapeError);
}

TEST_CASE("ewise ops") {
  Tensor a({3}, {1, 2, 3});
  Tensor b({3}, {0, 1, 2});
  Tensor prod = ewise_mul(a, b);
  CHECK(prod(0) == 0.0);
  CHECK(prod(1) == 2.0);
  CHECK(prod(2) == 6.0);

  Tensor zero({3});
  Tensor same = ewise_add(a, zero);
  for (int i = 0; i < 3; ++i) CHECK(same(i) == a(i));

  CHECK_THROWS_AS(ewise_add(a, Tensor({4})), ShapeError);
}

TEST_CASE("prelu definition") {
  Tensor x({2}, {-4.0, 2.0});
  Tensor y = prelu(x, 0.25);
  CHECK(y(0) == doctest::Approx(-1.0));
  CHECK(y(1) == doctest::Approx(2.0));
}

TEST_CASE("non-finite values are rejected") {
  Tensor a({2}, {1.0, 1e308});
  Tensor b({2}, {1.0, 1e308});
  CHECK_THROWS_AS(ewise_mul(a, b), NumericError);  // overflows to inf
}

TEST_CASE("rng determinism and range") {
  Rng a(1234);
  Rng b(1234);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("rng uniform_int covers bounds") {
  Rng rng(3);
  bool saw_lo = false, saw_hi = false;
  for (int i = 0; i < 2000; ++i) {
    auto v = rng.uniform_int(2, 5);
    CHECK(v >= 2);
    CHECK(v <= 5);
    saw_lo = saw_lo || v == 2;
    saw_hi = saw_hi || v == 5;
  }
  CHECK(saw_lo);
  CHECK(saw_hi);
}

TEST_CASE("rng derived streams differ") {
  Rng a = Rng::derive(99, 0);
  Rng b = Rng::derive(99, 1);
  Rng a2 = Rng::derive(99, 0);
  CHECK(a.next_u64() != b.next_u64());
  Rng a3 = Rng::derive(99, 0);
  CHECK(a2.next_u64() == a3.next_u64());
}
