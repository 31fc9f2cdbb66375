// include/mcmask/masking.hpp

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

#ifndef MCMASK_MASKING_HPP
#define MCMASK_MASKING_HPP

#include <vector>

#include "mcmask/filterbank.hpp"
#include "mcmask/graph.hpp"

namespace mcmask {

// One real-valued mask per channel, same shape as the channel representation.
// Values are unconstrained: the masks act as filter-and-sum beamformer
// weights, so no sigmoid and no [0, 1] clamping anywhere.
struct MaskSet {
  std::vector<Tensor> masks;

  int num_channels() const { return static_cast<int>(masks.size()); }
};

// Minimal mask-estimation network: per output channel, a stack of pointwise
// (feature-axis) affine maps with PReLU between them and a linear final
// layer. Input is the concatenation of all channel representations along the
// feature axis, realized as per-input-channel weight blocks.
struct MaskEstimator {
  struct Branch {
    std::vector<Tensor> input_blocks;  // per input channel, d0 x F
    std::vector<Tensor> weights;       // layers 1.., d_j x d_{j-1}
    std::vector<Tensor> biases;        // one per layer when with_bias, d_j x 1
    std::vector<Tensor> alphas;        // PReLU slopes, single-element, one per hidden layer
  };

  int input_channels = 0;
  int output_channels = 0;  // C for multi-channel masking, 1 for single-channel
  int num_features = 0;
  std::vector<int> hidden_dims;
  bool with_bias = true;
  std::vector<Branch> branches;

  bool single_channel() const { return output_channels == 1; }
  int num_layers() const { return static_cast<int>(hidden_dims.size()) + 1; }
  void validate() const;

  // Weights uniform in +-1/sqrt(fan_in); the final layer additionally scaled
  // by output_gain; biases zero; PReLU slopes 0.25.
  static MaskEstimator init_random(Rng& rng, int input_channels, int output_channels,
                                   int num_features, std::vector<int> hidden_dims,
                                   bool with_bias = true, double output_gain = 1.0);
};

// Full pipeline: encoder, mask estimator, decoder, and framing configuration.
struct SeparationModel {
  EncoderBank encoder;
  MaskEstimator estimator;
  DecoderBank decoder;
  int reference_channel = 0;
  int frame_length = 0;
  int hop = 0;

  int num_channels() const { return estimator.input_channels; }
  int num_features() const { return estimator.num_features; }
  void validate() const;

  // Trainable tensors in canonical order (encoder filters, estimator branch
  // parameters, decoder). build_pipeline_graph creates its leaves in the same
  // order.
  std::vector<Tensor*> parameters();
  std::vector<const Tensor*> parameters() const;
};

// sum_c masks[c] * reps[c], elementwise, accumulated in ascending channel
// order so the result is bit-deterministic.
FilterbankRepresentation filter_and_sum(const MaskSet& masks, const MultiChannelRepresentation& reps);

MaskSet estimate_masks(const MaskEstimator& est, const MultiChannelRepresentation& reps);

// Minimum-norm per-bin masks reproducing `target` exactly through
// filter_and_sum on every bin whose channel energy exceeds eps:
//   M_c = X_c * S / sum_c' X_c'^2, or zero on degenerate bins.
MaskSet oracle_masks(const MultiChannelRepresentation& reps, const FilterbankRepresentation& target,
                     double eps = 1e-12);

// segment -> encode per channel -> estimate masks -> filter-and-sum ->
// decode; output length equals input length.
Waveform separate(const SeparationModel& model, const MultiChannelWaveform& mix);

// Same pipeline with the estimator bypassed: `masks` is applied as-is.
// Used by the oracle-mask tests and the spatial-response analysis.
Waveform separate_with_masks(const SeparationModel& model, const MultiChannelWaveform& mix,
                             const MaskSet& masks);

// Encodes a mixture with the model's banks (no masking); building block for
// oracle-mask workflows.
MultiChannelRepresentation encode_mixture(const SeparationModel& model,
                                          const MultiChannelWaveform& mix);

// ---- training graph --------------------------------------------------------

// Static autodiff tape of the whole pipeline for one fixed utterance shape.
// Parameters are trainable leaves (param_nodes aligns with
// SeparationModel::parameters()); mixture frames and the loss reference are
// plain leaves refreshed per example via load_example + Graph::forward.
struct PipelineGraph {
  Graph graph;
  std::vector<int> param_nodes;
  std::vector<int> frame_inputs;  // per input channel
  int ones_row = -1;              // 1 x num_frames constant for bias terms
  int reference_input = -1;
  int output_node = -1;
  int loss_node = -1;
  int frame_length = 0;
  int hop = 0;
  int original_length = 0;
};

PipelineGraph build_pipeline_graph(const SeparationModel& model, int original_length,
                                   double loss_delta = 1e-9);

// Segment `mix`, load frames and the loss reference, and recompute the tape.
void load_example(PipelineGraph& pg, const MultiChannelWaveform& mix, const Waveform& target);

// Push current model parameter values into the tape (after an optimizer step).
void load_parameters(PipelineGraph& pg, const SeparationModel& model);

}  // namespace mcmask

#endif  // MCMASK_MASKING_HPP
