// include/mcmask/filterbank.hpp

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

#ifndef MCMASK_FILTERBANK_HPP
#define MCMASK_FILTERBANK_HPP

#include <vector>

#include "mcmask/framing.hpp"
#include "mcmask/rng.hpp"
#include "mcmask/tensor.hpp"

namespace mcmask {

// Analysis filters: either one matrix per channel or a single shared matrix,
// each num_features x frame_length.
struct EncoderBank {
  std::vector<Tensor> filters;
  bool shared = false;

  int num_features() const { return filters.front().rows(); }
  int frame_length() const { return filters.front().cols(); }
  const Tensor& filter_for_channel(int channel) const;
};

// Synthesis filters, frame_length x num_features.
struct DecoderBank {
  Tensor matrix;

  int frame_length() const { return matrix.rows(); }
  int num_features() const { return matrix.cols(); }
};

// num_features x num_frames feature matrix, plus the framing bookkeeping
// needed to get back to the time domain.
struct FilterbankRepresentation {
  Tensor values;
  int hop = 0;
  int original_length = 0;
  int sample_rate = 16000;

  int num_features() const { return values.rows(); }
  int num_frames() const { return values.cols(); }
};

// One representation per channel, shapes and framing identical.
struct MultiChannelRepresentation {
  std::vector<FilterbankRepresentation> channels;

  int num_channels() const { return static_cast<int>(channels.size()); }
  void validate() const;
};

FilterbankRepresentation encode(const FrameMatrix& frames, const EncoderBank& bank, int channel);
Waveform decode(const FilterbankRepresentation& rep, const DecoderBank& dec);

// Entries uniform in [-1/sqrt(frame_length), +1/sqrt(frame_length)].
EncoderBank init_random(Rng& rng, int num_channels, int num_features, int frame_length,
                        bool shared = false);

// Square real-DFT basis: rows cos(2*pi*k*t/T) for k = 0..T/2 followed by
// sin(2*pi*k*t/T) for k = 1..T/2-1. Shared across channels, full rank.
EncoderBank init_dft(int frame_length);

// Moore-Penrose inverse of a shared bank U (num_features x frame_length):
// the right inverse U^T (U U^T)^-1 when F <= T, the left inverse
// (U^T U)^-1 U^T when F > T, so decode(encode(x)) = x whenever U is
// injective and hop equals the frame length.
// Throws NumericError when the bank is rank-deficient (condition estimate
// above 1e12).
DecoderBank pseudo_inverse_decoder(const EncoderBank& bank);

// Solves G X = B for symmetric positive-definite G by Cholesky. The optional
// condition estimate is the squared ratio of extreme Cholesky pivots.
Tensor solve_spd(const Tensor& gram, const Tensor& rhs, double* condition_estimate = nullptr);

}  // namespace mcmask

#endif  // MCMASK_FILTERBANK_HPP
