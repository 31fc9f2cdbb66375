// include/mcmask/framing.hpp

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

#ifndef MCMASK_FRAMING_HPP
#define MCMASK_FRAMING_HPP

#include <vector>

#include "mcmask/tensor.hpp"

namespace mcmask {

struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  int length() const { return static_cast<int>(samples.size()); }
  double duration_s() const { return static_cast<double>(samples.size()) / sample_rate; }
};

struct MultiChannelWaveform {
  std::vector<Waveform> channels;

  int num_channels() const { return static_cast<int>(channels.size()); }
  int length() const { return channels.empty() ? 0 : channels.front().length(); }
  int sample_rate() const { return channels.empty() ? 0 : channels.front().sample_rate; }

  // All channels share length and sample rate; throws ShapeError otherwise.
  void validate() const;
};

// Rectangular frames, one per column. Zero-padded at the tail so that
// num_frames = ceil(max(length - frame_length, 0) / hop) + 1.
struct FrameMatrix {
  Tensor frames;  // frame_length x num_frames
  int hop = 0;
  int original_length = 0;
  int sample_rate = 16000;

  int frame_length() const { return frames.rows(); }
  int num_frames() const { return frames.cols(); }
};

int num_frames_for(int length, int frame_length, int hop);

// Frame n holds samples [n*hop, n*hop + frame_length).
FrameMatrix segment(const Waveform& w, int frame_length, int hop);

// Sum frames at their hop offsets; output truncated to original_length.
Waveform overlap_add(const FrameMatrix& f);

// Kernels shared with the autodiff graph.
Tensor segment_columns(std::span<const double> samples, int frame_length, int hop);
Tensor overlap_add_columns(const Tensor& frames, int hop, int original_length);

}  // namespace mcmask

#endif  // MCMASK_FRAMING_HPP
