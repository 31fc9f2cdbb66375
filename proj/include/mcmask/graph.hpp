// include/mcmask/graph.hpp

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

#ifndef MCMASK_GRAPH_HPP
#define MCMASK_GRAPH_HPP

#include <array>
#include <vector>

#include "mcmask/tensor.hpp"

namespace mcmask {

// Reverse-mode gradients over the fixed operation set of the separation
// pipeline: matmul, elementwise mul/add/sub, prelu, overlap-add, negative-SDR
// loss. Not a general autodiff engine; every op it will ever need is below.
//
// The graph is a static tape: build the topology once, then re-run forward()
// after set_value() on leaves. Node ids are topologically ordered by
// construction (an op's inputs always precede it).
class Graph {
 public:
  enum class Op { kLeaf, kMatMul, kMul, kAdd, kSub, kPRelu, kOverlapAdd, kNegSdrLoss };

  struct Node {
    Op op = Op::kLeaf;
    std::array<int, 2> inputs{-1, -1};
    Tensor value;
    bool trainable = false;  // leaves only
    int hop = 0;             // kOverlapAdd
    int original_length = 0; // kOverlapAdd
    double delta = 0.0;      // kNegSdrLoss stabilizer
  };

  // Leaves hold parameters (trainable) or data (not). Values may be replaced
  // later via set_value(); shapes are fixed at creation.
  int leaf(Tensor value, bool trainable = false);

  int matmul(int a, int b);
  int mul(int a, int b);
  int add(int a, int b);
  int sub(int a, int b);
  // alpha must be a single-element node (the learnable slope).
  int prelu(int x, int alpha);
  // frames: T x N matrix, one frame per column; output is a length
  // `original_length` vector summing frames at offsets n * hop.
  int overlap_add(int frames, int hop, int original_length);
  // Scalar -10*log10(sum(ref^2) / (sum((ref-est)^2) + delta)).
  int neg_sdr_loss(int estimate, int reference, double delta = 1e-9);

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const Tensor& value(int id) const { return nodes_[static_cast<size_t>(id)].value; }
  bool is_leaf(int id) const { return nodes_[static_cast<size_t>(id)].op == Op::kLeaf; }
  bool is_trainable(int id) const { return nodes_[static_cast<size_t>(id)].trainable; }
  std::vector<int> trainable_leaves() const;

  // Replace a leaf's value; the new tensor must match the recorded shape.
  void set_value(int leaf_id, Tensor v);

  // Recompute all op nodes in id order from the current leaf values.
  void forward();

  // Exact reverse-mode sweep from a scalar loss node. Returns one adjoint per
  // node id; leaves not reached by the sweep get explicit zero gradients.
  std::vector<Tensor> backward(int loss_id) const;

  // Max relative disagreement between the analytic gradient of `leaf_id` and
  // central differences with step `eps`:
  //   max_i |analytic_i - cd_i| / max(|analytic_i|, |cd_i|, 1e-8)
  // Restores leaf values and cached outputs before returning.
  double grad_check(int loss_id, int leaf_id, double eps);

 private:
  int add_node(Node n);
  Tensor eval(const Node& n) const;
  void check_id(int id, const char* what) const;

  std::vector<Node> nodes_;
};

}  // namespace mcmask

#endif  // MCMASK_GRAPH_HPP
