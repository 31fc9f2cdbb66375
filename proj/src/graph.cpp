// src/graph.cpp

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

#include "mcmask/graph.hpp"

#include <cmath>

#include "mcmask/framing.hpp"

namespace mcmask {

namespace {

constexpr double kTenOverLn10 = 10.0 / 2.30258509299404568402;

// Accumulate `delta` into `acc`, materializing zeros on first touch.
void accumulate(Tensor& acc, const Tensor& delta) {
  if (!acc.defined()) {
    acc = delta;
    return;
  }
  auto pa = acc.data();
  auto pd = delta.data();
  for (int i = 0; i < acc.size(); ++i) pa[i] += pd[i];
}

void accumulate_neg(Tensor& acc, const Tensor& delta) {
  if (!acc.defined()) acc = Tensor(delta.shape());
  auto pa = acc.data();
  auto pd = delta.data();
  for (int i = 0; i < acc.size(); ++i) pa[i] -= pd[i];
}

double neg_sdr_scalar(const Tensor& est, const Tensor& ref, double delta) {
  const double ref_power = sum_squares(ref.data());
  if (ref_power == 0.0) throw NumericError("neg_sdr_loss: reference signal is all-zero");
  double err_power = 0.0;
  auto pe = est.data();
  auto pr = ref.data();
  for (int i = 0; i < est.size(); ++i) {
    const double d = pr[i] - pe[i];
    err_power += d * d;
  }
  return -kTenOverLn10 * (std::log(ref_power) - std::log(err_power + delta));
}

}  // namespace

int Graph::add_node(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

void Graph::check_id(int id, const char* what) const {
  if (id < 0 || id >= num_nodes()) throw ShapeError(std::string(what) + ": bad node id");
}

int Graph::leaf(Tensor value, bool trainable) {
  require_finite(value, "leaf");
  Node n;
  n.op = Op::kLeaf;
  n.value = std::move(value);
  n.trainable = trainable;
  return add_node(std::move(n));
}

int Graph::matmul(int a, int b) {
  check_id(a, "matmul");
  check_id(b, "matmul");
  Node n;
  n.op = Op::kMatMul;
  n.inputs = {a, b};
  n.value = mcmask::matmul(value(a), value(b));
  return add_node(std::move(n));
}

int Graph::mul(int a, int b) {
  check_id(a, "mul");
  check_id(b, "mul");
  Node n;
  n.op = Op::kMul;
  n.inputs = {a, b};
  n.value = ewise_mul(value(a), value(b));
  return add_node(std::move(n));
}

int Graph::add(int a, int b) {
  check_id(a, "add");
  check_id(b, "add");
  Node n;
  n.op = Op::kAdd;
  n.inputs = {a, b};
  n.value = ewise_add(value(a), value(b));
  return add_node(std::move(n));
}

int Graph::sub(int a, int b) {
  check_id(a, "sub");
  check_id(b, "sub");
  Node n;
  n.op = Op::kSub;
  n.inputs = {a, b};
  n.value = ewise_sub(value(a), value(b));
  return add_node(std::move(n));
}

int Graph::prelu(int x, int alpha) {
  check_id(x, "prelu");
  check_id(alpha, "prelu");
  if (value(alpha).size() != 1) throw ShapeError("prelu: alpha must be a single-element tensor");
  Node n;
  n.op = Op::kPRelu;
  n.inputs = {x, alpha};
  n.value = mcmask::prelu(value(x), value(alpha)(0));
  return add_node(std::move(n));
}

int Graph::overlap_add(int frames, int hop, int original_length) {
  check_id(frames, "overlap_add");
  if (hop < 1) throw ShapeError("overlap_add: hop must be >= 1");
  if (original_length < 0) throw ShapeError("overlap_add: negative original_length");
  Node n;
  n.op = Op::kOverlapAdd;
  n.inputs = {frames, -1};
  n.hop = hop;
  n.original_length = original_length;
  n.value = overlap_add_columns(value(frames), hop, original_length);
  return add_node(std::move(n));
}

int Graph::neg_sdr_loss(int estimate, int reference, double delta) {
  check_id(estimate, "neg_sdr_loss");
  check_id(reference, "neg_sdr_loss");
  if (!value(estimate).same_shape(value(reference)))
    throw ShapeError("neg_sdr_loss: estimate and reference shapes disagree");
  Node n;
  n.op = Op::kNegSdrLoss;
  n.inputs = {estimate, reference};
  n.delta = delta;
  n.value = Tensor::scalar(neg_sdr_scalar(value(estimate), value(reference), delta));
  return add_node(std::move(n));
}

std::vector<int> Graph::trainable_leaves() const {
  std::vector<int> ids;
  for (int i = 0; i < num_nodes(); ++i)
    if (nodes_[static_cast<size_t>(i)].trainable) ids.push_back(i);
  return ids;
}

void Graph::set_value(int leaf_id, Tensor v) {
  check_id(leaf_id, "set_value");
  Node& n = nodes_[static_cast<size_t>(leaf_id)];
  if (n.op != Op::kLeaf) throw ShapeError("set_value: node is not a leaf");
  if (!n.value.same_shape(v))
    throw ShapeError("set_value: shape " + v.shape_str() + " does not match leaf " + n.value.shape_str());
  require_finite(v, "set_value");
  n.value = std::move(v);
}

Tensor Graph::eval(const Node& n) const {
  switch (n.op) {
    case Op::kMatMul:
      return mcmask::matmul(value(n.inputs[0]), value(n.inputs[1]));
    case Op::kMul:
      return ewise_mul(value(n.inputs[0]), value(n.inputs[1]));
    case Op::kAdd:
      return ewise_add(value(n.inputs[0]), value(n.inputs[1]));
    case Op::kSub:
      return ewise_sub(value(n.inputs[0]), value(n.inputs[1]));
    case Op::kPRelu:
      return mcmask::prelu(value(n.inputs[0]), value(n.inputs[1])(0));
    case Op::kOverlapAdd:
      return overlap_add_columns(value(n.inputs[0]), n.hop, n.original_length);
    case Op::kNegSdrLoss:
      return Tensor::scalar(neg_sdr_scalar(value(n.inputs[0]), value(n.inputs[1]), n.delta));
    case Op::kLeaf:
      break;
  }
  throw NumericError("eval: leaf nodes are not evaluated");
}

void Graph::forward() {
  for (Node& n : nodes_)
    if (n.op != Op::kLeaf) n.value = eval(n);
}

std::vector<Tensor> Graph::backward(int loss_id) const {
  check_id(loss_id, "backward");
  if (value(loss_id).size() != 1) throw ShapeError("backward: loss node must be scalar");

  std::vector<Tensor> adj(nodes_.size());
  adj[static_cast<size_t>(loss_id)] = Tensor::ones(value(loss_id).shape());

  for (int id = loss_id; id >= 0; --id) {
    const Node& n = nodes_[static_cast<size_t>(id)];
    const Tensor& g = adj[static_cast<size_t>(id)];
    if (!g.defined() || n.op == Op::kLeaf) continue;
    const int a = n.inputs[0];
    const int b = n.inputs[1];
    switch (n.op) {
      case Op::kMatMul:
        accumulate(adj[static_cast<size_t>(a)], mcmask::matmul(g, transpose(value(b))));
        accumulate(adj[static_cast<size_t>(b)], mcmask::matmul(transpose(value(a)), g));
        break;
      case Op::kMul:
        accumulate(adj[static_cast<size_t>(a)], ewise_mul(g, value(b)));
        accumulate(adj[static_cast<size_t>(b)], ewise_mul(g, value(a)));
        break;
      case Op::kAdd:
        accumulate(adj[static_cast<size_t>(a)], g);
        accumulate(adj[static_cast<size_t>(b)], g);
        break;
      case Op::kSub:
        accumulate(adj[static_cast<size_t>(a)], g);
        accumulate_neg(adj[static_cast<size_t>(b)], g);
        break;
      case Op::kPRelu: {
        const Tensor& x = value(a);
        const double slope = value(b)(0);
        Tensor dx(x.shape());
        double dalpha = 0.0;
        auto px = x.data();
        auto pg = g.data();
        auto pdx = dx.data();
        for (int i = 0; i < x.size(); ++i) {
          if (px[i] >= 0.0) {
            pdx[i] = pg[i];
          } else {
            pdx[i] = pg[i] * slope;
            dalpha += pg[i] * px[i];
          }
        }
        accumulate(adj[static_cast<size_t>(a)], dx);
        accumulate(adj[static_cast<size_t>(b)], Tensor::scalar(dalpha));
        break;
      }
      case Op::kOverlapAdd: {
        // Adjoint of the scatter-sum is the gather back into frames.
        const Tensor& frames = value(a);
        const int frame_len = frames.rows();
        const int num_frames = frames.cols();
        Tensor df({frame_len, num_frames});
        auto pg = g.data();
        for (int f = 0; f < num_frames; ++f) {
          const int offset = f * n.hop;
          for (int i = 0; i < frame_len; ++i) {
            const int t = offset + i;
            if (t < n.original_length) df(i, f) = pg[t];
          }
        }
        accumulate(adj[static_cast<size_t>(a)], df);
        break;
      }
      case Op::kNegSdrLoss: {
        const Tensor& est = value(a);
        const Tensor& ref = value(b);
        const double gs = g(0);
        const double ref_power = sum_squares(ref.data());
        double err_power = 0.0;
        auto pe = est.data();
        auto pr = ref.data();
        for (int i = 0; i < est.size(); ++i) {
          const double d = pr[i] - pe[i];
          err_power += d * d;
        }
        const double inv_err = 1.0 / (err_power + n.delta);
        Tensor de(est.shape());
        Tensor dr(ref.shape());
        auto pde = de.data();
        auto pdr = dr.data();
        for (int i = 0; i < est.size(); ++i) {
          const double diff = pe[i] - pr[i];
          pde[i] = gs * kTenOverLn10 * 2.0 * diff * inv_err;
          pdr[i] = gs * kTenOverLn10 * (-2.0 * pr[i] / ref_power - 2.0 * diff * inv_err);
        }
        accumulate(adj[static_cast<size_t>(a)], de);
        accumulate(adj[static_cast<size_t>(b)], dr);
        break;
      }
      case Op::kLeaf:
        break;
    }
  }

  // Disconnected leaves get zeros rather than missing entries.
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].op == Op::kLeaf && !adj[i].defined()) adj[i] = Tensor(nodes_[i].value.shape());
  }
  return adj;
}

double Graph::grad_check(int loss_id, int leaf_id, double eps) {
  check_id(loss_id, "grad_check");
  check_id(leaf_id, "grad_check");
  if (eps <= 0.0) throw ShapeError("grad_check: eps must be positive");
  if (!is_leaf(leaf_id)) throw ShapeError("grad_check: target node is not a leaf");

  forward();
  const Tensor analytic = backward(loss_id)[static_cast<size_t>(leaf_id)];

  Node& leaf_node = nodes_[static_cast<size_t>(leaf_id)];
  double worst = 0.0;
  for (int i = 0; i < leaf_node.value.size(); ++i) {
    const double saved = leaf_node.value(i);
    leaf_node.value(i) = saved + eps;
    forward();
    const double loss_plus = value(loss_id)(0);
    leaf_node.value(i) = saved - eps;
    forward();
    const double loss_minus = value(loss_id)(0);
    leaf_node.value(i) = saved;
    const double cd = (loss_plus - loss_minus) / (2.0 * eps);
    const double a = analytic(i);
    const double denom = std::max({std::fabs(a), std::fabs(cd), 1e-8});
    worst = std::max(worst, std::fabs(a - cd) / denom);
  }
  forward();  // restore cached outputs
  return worst;
}

}  // namespace mcmask
