// src/masking.cpp

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

#include "mcmask/masking.hpp"

#include <cmath>
#include <string>

namespace mcmask {

namespace {

// Layer output dims: hidden_dims then num_features.
int layer_dim(const MaskEstimator& est, int layer) {
  if (layer < static_cast<int>(est.hidden_dims.size()))
    return est.hidden_dims[static_cast<size_t>(layer)];
  return est.num_features;
}

}  // namespace

void MaskEstimator::validate() const {
  if (input_channels < 1) throw ShapeError("estimator: input_channels must be >= 1");
  if (output_channels < 1) throw ShapeError("estimator: output_channels must be >= 1");
  if (static_cast<int>(branches.size()) != output_channels)
    throw ShapeError("estimator: branch count does not match output_channels");
  for (const Branch& br : branches) {
    if (static_cast<int>(br.input_blocks.size()) != input_channels)
      throw ShapeError("estimator: input block count does not match input_channels");
    const int d0 = layer_dim(*this, 0);
    for (const Tensor& blk : br.input_blocks)
      if (blk.rows() != d0 || blk.cols() != num_features)
        throw ShapeError("estimator: input block shape mismatch");
    if (static_cast<int>(br.weights.size()) != num_layers() - 1)
      throw ShapeError("estimator: weight count mismatch");
    for (int j = 1; j < num_layers(); ++j) {
      const Tensor& w = br.weights[static_cast<size_t>(j - 1)];
      if (w.rows() != layer_dim(*this, j) || w.cols() != layer_dim(*this, j - 1))
        throw ShapeError("estimator: weight shape mismatch at layer " + std::to_string(j));
    }
    if (with_bias && static_cast<int>(br.biases.size()) != num_layers())
      throw ShapeError("estimator: bias count mismatch");
    if (static_cast<int>(br.alphas.size()) != num_layers() - 1)
      throw ShapeError("estimator: alpha count mismatch");
  }
}

MaskEstimator MaskEstimator::init_random(Rng& rng, int input_channels, int output_channels,
                                         int num_features, std::vector<int> hidden_dims,
                                         bool with_bias, double output_gain) {
  MaskEstimator est;
  est.input_channels = input_channels;
  est.output_channels = output_channels;
  est.num_features = num_features;
  est.hidden_dims = std::move(hidden_dims);
  est.with_bias = with_bias;
  const int layers = est.num_layers();
  for (int b = 0; b < output_channels; ++b) {
    Branch br;
    const int d0 = layer_dim(est, 0);
    const double bound0 = 1.0 / std::sqrt(static_cast<double>(input_channels * num_features));
    const double gain0 = layers == 1 ? output_gain : 1.0;
    for (int c = 0; c < input_channels; ++c) {
      Tensor blk({d0, num_features});
      for (int i = 0; i < blk.size(); ++i) blk(i) = gain0 * rng.uniform(-bound0, bound0);
      br.input_blocks.push_back(std::move(blk));
    }
    if (with_bias) br.biases.push_back(Tensor({d0, 1}));
    for (int j = 1; j < layers; ++j) {
      const int rows = layer_dim(est, j);
      const int cols = layer_dim(est, j - 1);
      const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
      const double gain = j == layers - 1 ? output_gain : 1.0;
      Tensor w({rows, cols});
      for (int i = 0; i < w.size(); ++i) w(i) = gain * rng.uniform(-bound, bound);
      br.weights.push_back(std::move(w));
      if (with_bias) br.biases.push_back(Tensor({rows, 1}));
    }
    for (int j = 0; j < layers - 1; ++j) br.alphas.push_back(Tensor::scalar(0.25));
    est.branches.push_back(std::move(br));
  }
  return est;
}

void SeparationModel::validate() const {
  estimator.validate();
  const int c = num_channels();
  if (!encoder.shared && static_cast<int>(encoder.filters.size()) != c)
    throw ShapeError("model: encoder channel count mismatch");
  if (encoder.num_features() != num_features() || encoder.frame_length() != frame_length)
    throw ShapeError("model: encoder shape mismatch");
  if (decoder.frame_length() != frame_length || decoder.num_features() != num_features())
    throw ShapeError("model: decoder shape mismatch");
  if (reference_channel < 0 || reference_channel >= c)
    throw ShapeError("model: reference channel out of range");
  if (hop < 1 || hop > frame_length) throw ShapeError("model: hop out of range");
  if (!estimator.single_channel() && estimator.output_channels != c)
    throw ShapeError("model: estimator output channels must be 1 or num_channels");
}

// Canonical parameter order; build_pipeline_graph mirrors this exactly.
template <class ModelT, class TensorPtr>
static std::vector<TensorPtr> collect_parameters(ModelT& model) {
  std::vector<TensorPtr> out;
  for (auto& filt : model.encoder.filters) out.push_back(&filt);
  for (auto& br : model.estimator.branches) {
    for (auto& blk : br.input_blocks) out.push_back(&blk);
    for (auto& w : br.weights) out.push_back(&w);
    for (auto& b : br.biases) out.push_back(&b);
    for (auto& a : br.alphas) out.push_back(&a);
  }
  out.push_back(&model.decoder.matrix);
  return out;
}

std::vector<Tensor*> SeparationModel::parameters() {
  return collect_parameters<SeparationModel, Tensor*>(*this);
}

std::vector<const Tensor*> SeparationModel::parameters() const {
  return collect_parameters<const SeparationModel, const Tensor*>(*this);
}

FilterbankRepresentation filter_and_sum(const MaskSet& masks, const MultiChannelRepresentation& reps) {
  reps.validate();
  if (masks.num_channels() != reps.num_channels())
    throw ShapeError("filter_and_sum: mask and representation channel counts disagree");
  FilterbankRepresentation out;
  const FilterbankRepresentation& first = reps.channels.front();
  out.hop = first.hop;
  out.original_length = first.original_length;
  out.sample_rate = first.sample_rate;
  // ascending channel order, fixed
  out.values = ewise_mul(masks.masks[0], reps.channels[0].values);
  for (int c = 1; c < reps.num_channels(); ++c)
    out.values = ewise_add(out.values, ewise_mul(masks.masks[static_cast<size_t>(c)],
                                                 reps.channels[static_cast<size_t>(c)].values));
  return out;
}

MaskSet estimate_masks(const MaskEstimator& est, const MultiChannelRepresentation& reps) {
  reps.validate();
  if (reps.num_channels() != est.input_channels)
    throw ShapeError("estimate_masks: channel count does not match estimator");
  if (reps.channels.front().num_features() != est.num_features)
    throw ShapeError("estimate_masks: feature count does not match estimator");
  const int n = reps.channels.front().num_frames();
  const Tensor ones_row = Tensor::ones({1, n});

  MaskSet out;
  for (const MaskEstimator::Branch& br : est.branches) {
    Tensor h = matmul(br.input_blocks[0], reps.channels[0].values);
    for (int c = 1; c < est.input_channels; ++c)
      h = ewise_add(h, matmul(br.input_blocks[static_cast<size_t>(c)],
                              reps.channels[static_cast<size_t>(c)].values));
    if (est.with_bias) h = ewise_add(h, matmul(br.biases[0], ones_row));
    for (int j = 1; j < est.num_layers(); ++j) {
      h = prelu(h, br.alphas[static_cast<size_t>(j - 1)](0));
      h = matmul(br.weights[static_cast<size_t>(j - 1)], h);
      if (est.with_bias) h = ewise_add(h, matmul(br.biases[static_cast<size_t>(j)], ones_row));
    }
    out.masks.push_back(std::move(h));
  }
  return out;
}

MaskSet oracle_masks(const MultiChannelRepresentation& reps, const FilterbankRepresentation& target,
                     double eps) {
  reps.validate();
  if (eps <= 0.0) throw ShapeError("oracle_masks: eps must be positive");
  if (!target.values.same_shape(reps.channels.front().values))
    throw ShapeError("oracle_masks: target shape mismatch");
  const int channels = reps.num_channels();
  const int count = target.values.size();

  MaskSet out;
  for (int c = 0; c < channels; ++c) out.masks.emplace_back(target.values.shape());
  for (int i = 0; i < count; ++i) {
    double denom = 0.0;
    for (int c = 0; c < channels; ++c) {
      const double x = reps.channels[static_cast<size_t>(c)].values(i);
      denom += x * x;
    }
    if (denom > eps) {
      const double s = target.values(i) / denom;
      for (int c = 0; c < channels; ++c)
        out.masks[static_cast<size_t>(c)](i) = reps.channels[static_cast<size_t>(c)].values(i) * s;
    }
  }
  return out;
}

MultiChannelRepresentation encode_mixture(const SeparationModel& model,
                                          const MultiChannelWaveform& mix) {
  mix.validate();
  if (mix.num_channels() != model.num_channels())
    throw ShapeError("encode_mixture: mixture has " + std::to_string(mix.num_channels()) +
                     " channels, model expects " + std::to_string(model.num_channels()));
  MultiChannelRepresentation reps;
  for (int c = 0; c < mix.num_channels(); ++c) {
    FrameMatrix frames = segment(mix.channels[static_cast<size_t>(c)], model.frame_length, model.hop);
    reps.channels.push_back(encode(frames, model.encoder, c));
  }
  return reps;
}

namespace {

// Pipeline stages raise NumericError on non-finite values; tag them with the
// stage name so a failure points at the culprit.
template <class F>
auto stage(const char* name, F f) {
  try {
    return f();
  } catch (const NumericError& e) {
    throw NumericError(std::string("separate: stage '") + name + "': " + e.what());
  }
}

Waveform run_pipeline(const SeparationModel& model, const MultiChannelWaveform& mix,
                      const MaskSet& masks) {
  MultiChannelRepresentation reps = stage("encode", [&] { return encode_mixture(model, mix); });

  FilterbankRepresentation summed;
  if (static_cast<int>(masks.masks.size()) == 1 && model.num_channels() > 1) {
    // single-channel masking: one mask on the reference channel only
    const FilterbankRepresentation& ref_rep =
        reps.channels[static_cast<size_t>(model.reference_channel)];
    summed.values = stage("mask", [&] { return ewise_mul(masks.masks[0], ref_rep.values); });
    summed.hop = ref_rep.hop;
    summed.original_length = ref_rep.original_length;
    summed.sample_rate = ref_rep.sample_rate;
  } else {
    summed = stage("filter_and_sum", [&] { return filter_and_sum(masks, reps); });
  }
  return stage("decode", [&] { return decode(summed, model.decoder); });
}

}  // namespace

Waveform separate(const SeparationModel& model, const MultiChannelWaveform& mix) {
  MultiChannelRepresentation reps = stage("encode", [&] { return encode_mixture(model, mix); });
  MaskSet masks = stage("estimate_masks", [&] { return estimate_masks(model.estimator, reps); });
  return run_pipeline(model, mix, masks);
}

Waveform separate_with_masks(const SeparationModel& model, const MultiChannelWaveform& mix,
                             const MaskSet& masks) {
  return run_pipeline(model, mix, masks);
}

PipelineGraph build_pipeline_graph(const SeparationModel& model, int original_length,
                                   double loss_delta) {
  model.validate();
  PipelineGraph pg;
  pg.frame_length = model.frame_length;
  pg.hop = model.hop;
  pg.original_length = original_length;
  Graph& g = pg.graph;

  const int channels = model.num_channels();
  const int num_frames = num_frames_for(original_length, model.frame_length, model.hop);

  // Parameter leaves in the same order as SeparationModel::parameters().
  std::vector<int> encoder_nodes;
  for (const Tensor& filt : model.encoder.filters) {
    int id = g.leaf(filt, true);
    encoder_nodes.push_back(id);
    pg.param_nodes.push_back(id);
  }
  struct BranchNodes {
    std::vector<int> input_blocks, weights, biases, alphas;
  };
  std::vector<BranchNodes> branch_nodes;
  for (const MaskEstimator::Branch& br : model.estimator.branches) {
    BranchNodes bn;
    for (const Tensor& t : br.input_blocks) bn.input_blocks.push_back(g.leaf(t, true));
    for (const Tensor& t : br.weights) bn.weights.push_back(g.leaf(t, true));
    for (const Tensor& t : br.biases) bn.biases.push_back(g.leaf(t, true));
    for (const Tensor& t : br.alphas) bn.alphas.push_back(g.leaf(t, true));
    for (int id : bn.input_blocks) pg.param_nodes.push_back(id);
    for (int id : bn.weights) pg.param_nodes.push_back(id);
    for (int id : bn.biases) pg.param_nodes.push_back(id);
    for (int id : bn.alphas) pg.param_nodes.push_back(id);
    branch_nodes.push_back(std::move(bn));
  }
  const int decoder_node = g.leaf(model.decoder.matrix, true);
  pg.param_nodes.push_back(decoder_node);

  // Data leaves. The reference starts as ones: a zero reference would be
  // rejected by the loss op during construction.
  for (int c = 0; c < channels; ++c)
    pg.frame_inputs.push_back(g.leaf(Tensor({model.frame_length, num_frames})));
  pg.ones_row = g.leaf(Tensor::ones({1, num_frames}));
  pg.reference_input = g.leaf(Tensor::ones({original_length}));

  // Encode each channel.
  std::vector<int> reps;
  for (int c = 0; c < channels; ++c) {
    const int bank = model.encoder.shared ? encoder_nodes[0] : encoder_nodes[static_cast<size_t>(c)];
    reps.push_back(g.matmul(bank, pg.frame_inputs[static_cast<size_t>(c)]));
  }

  // Mask estimation branches.
  std::vector<int> mask_nodes;
  for (const BranchNodes& bn : branch_nodes) {
    int h = g.matmul(bn.input_blocks[0], reps[0]);
    for (int c = 1; c < channels; ++c)
      h = g.add(h, g.matmul(bn.input_blocks[static_cast<size_t>(c)], reps[static_cast<size_t>(c)]));
    if (model.estimator.with_bias) h = g.add(h, g.matmul(bn.biases[0], pg.ones_row));
    for (int j = 1; j < model.estimator.num_layers(); ++j) {
      h = g.prelu(h, bn.alphas[static_cast<size_t>(j - 1)]);
      h = g.matmul(bn.weights[static_cast<size_t>(j - 1)], h);
      if (model.estimator.with_bias)
        h = g.add(h, g.matmul(bn.biases[static_cast<size_t>(j)], pg.ones_row));
    }
    mask_nodes.push_back(h);
  }

  // Filter-and-sum (or single-channel masking of the reference channel).
  int summed;
  if (model.estimator.single_channel() && channels > 1) {
    summed = g.mul(mask_nodes[0], reps[static_cast<size_t>(model.reference_channel)]);
  } else {
    summed = g.mul(mask_nodes[0], reps[0]);
    for (int c = 1; c < channels; ++c)
      summed = g.add(summed, g.mul(mask_nodes[static_cast<size_t>(c)], reps[static_cast<size_t>(c)]));
  }

  const int out_frames = g.matmul(decoder_node, summed);
  pg.output_node = g.overlap_add(out_frames, model.hop, original_length);
  pg.loss_node = g.neg_sdr_loss(pg.output_node, pg.reference_input, loss_delta);
  return pg;
}

void load_example(PipelineGraph& pg, const MultiChannelWaveform& mix, const Waveform& target) {
  mix.validate();
  if (mix.num_channels() != static_cast<int>(pg.frame_inputs.size()))
    throw ShapeError("load_example: channel count mismatch");
  if (mix.length() != pg.original_length || target.length() != pg.original_length)
    throw ShapeError("load_example: length does not match graph layout");
  for (int c = 0; c < mix.num_channels(); ++c) {
    Tensor frames =
        segment_columns(mix.channels[static_cast<size_t>(c)].samples, pg.frame_length, pg.hop);
    pg.graph.set_value(pg.frame_inputs[static_cast<size_t>(c)], std::move(frames));
  }
  pg.graph.set_value(pg.reference_input, Tensor({pg.original_length}, target.samples));
  pg.graph.forward();
}

void load_parameters(PipelineGraph& pg, const SeparationModel& model) {
  const auto params = model.parameters();
  if (params.size() != pg.param_nodes.size())
    throw ShapeError("load_parameters: parameter count mismatch");
  for (size_t i = 0; i < params.size(); ++i) pg.graph.set_value(pg.param_nodes[i], *params[i]);
}

}  // namespace mcmask
