// src/framing.cpp

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

#include "mcmask/framing.hpp"

namespace mcmask {

void MultiChannelWaveform::validate() const {
  if (channels.empty()) throw ShapeError("multi-channel waveform has no channels");
  const int len = channels.front().length();
  const int rate = channels.front().sample_rate;
  for (const Waveform& ch : channels) {
    if (ch.length() != len) throw ShapeError("channel lengths disagree");
    if (ch.sample_rate != rate) throw ShapeError("channel sample rates disagree");
  }
}

int num_frames_for(int length, int frame_length, int hop) {
  const int overhang = length > frame_length ? length - frame_length : 0;
  return (overhang + hop - 1) / hop + 1;
}

Tensor segment_columns(std::span<const double> samples, int frame_length, int hop) {
  if (frame_length < 1) throw ShapeError("segment: frame_length must be >= 1");
  if (hop < 1 || hop > frame_length) throw ShapeError("segment: hop must be in [1, frame_length]");
  if (samples.empty()) throw ShapeError("segment: empty waveform");
  const int length = static_cast<int>(samples.size());
  const int n = num_frames_for(length, frame_length, hop);
  Tensor frames({frame_length, n});
  for (int f = 0; f < n; ++f) {
    const int offset = f * hop;
    for (int i = 0; i < frame_length; ++i) {
      const int t = offset + i;
      if (t < length) frames(i, f) = samples[static_cast<size_t>(t)];
    }
  }
  return frames;
}

Tensor overlap_add_columns(const Tensor& frames, int hop, int original_length) {
  if (frames.ndim() != 2) throw ShapeError("overlap_add: frames must be 2-D");
  if (hop < 1) throw ShapeError("overlap_add: hop must be >= 1");
  const int frame_length = frames.rows();
  const int n = frames.cols();
  Tensor out({original_length});
  auto po = out.data();
  for (int f = 0; f < n; ++f) {
    const int offset = f * hop;
    for (int i = 0; i < frame_length; ++i) {
      const int t = offset + i;
      if (t < original_length) po[t] += frames(i, f);
    }
  }
  return out;
}

FrameMatrix segment(const Waveform& w, int frame_length, int hop) {
  FrameMatrix f;
  f.frames = segment_columns(w.samples, frame_length, hop);
  f.hop = hop;
  f.original_length = w.length();
  f.sample_rate = w.sample_rate;
  return f;
}

Waveform overlap_add(const FrameMatrix& f) {
  Waveform w;
  w.sample_rate = f.sample_rate;
  Tensor out = overlap_add_columns(f.frames, f.hop, f.original_length);
  w.samples.assign(out.data().begin(), out.data().end());
  return w;
}

}  // namespace mcmask
