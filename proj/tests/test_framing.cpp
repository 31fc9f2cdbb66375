// tests/test_framing.cpp

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

#include "mcmask/framing.hpp"
#include "mcmask/rng.hpp"

using namespace mcmask;

namespace {

Waveform make_wave(std::vector<double> samples, int rate = 16000) {
  Waveform w;
  w.samples = std::move(samples);
  w.sample_rate = rate;
  return w;
}

Waveform random_wave(int length, Rng& rng, int rate = 16000) {
  Waveform w;
  w.sample_rate = rate;
  w.samples.resize(static_cast<size_t>(length));
  for (double& v : w.samples) v = rng.uniform(-1.0, 1.0);
  return w;
}

}  // namespace

TEST_CASE("segment basic hop-1 case") {
  FrameMatrix f = segment(make_wave({1, 2, 3, 4}), 2, 1);
  CHECK(f.num_frames() == 3);
  CHECK(f.frames(0, 0) == 1);
  CHECK(f.frames(1, 0) == 2);
  CHECK(f.frames(0, 1) == 2);
  CHECK(f.frames(1, 1) == 3);
  CHECK(f.frames(0, 2) == 3);
  CHECK(f.frames(1, 2) == 4);
}

TEST_CASE("segment zero-pads a short signal") {
  FrameMatrix f = segment(make_wave({1, 2, 3}), 4, 2);
  CHECK(f.num_frames() == 1);
  CHECK(f.frames(0, 0) == 1);
  CHECK(f.frames(1, 0) == 2);
  CHECK(f.frames(2, 0) == 3);
  CHECK(f.frames(3, 0) == 0);
  CHECK(f.original_length == 3);
}

TEST_CASE("frame count for the half-window hop rule") {
  Rng rng(5);
  Waveform w = random_wave(48000, rng);
  FrameMatrix f = segment(w, 256, 128);
  // independent count: slide until the window start passes the signal end
  int count = 0;
  for (int start = 0;; start += 128) {
    ++count;
    if (start + 256 >= 48000) break;
  }
  CHECK(count == 374);
  CHECK(f.num_frames() == 374);
}

TEST_CASE("segment rejects bad arguments") {
  CHECK_THROWS_AS(segment(make_wave({}), 4, 2), ShapeError);
  CHECK_THROWS_AS(segment(make_wave({1, 2}), 2, 3), ShapeError);
  CHECK_THROWS_AS(segment(make_wave({1, 2}), 0, 1), ShapeError);
}

TEST_CASE("overlap_add positional sums") {
  FrameMatrix f;
  f.frames = Tensor({2, 3}, {1, 2, 3, 2, 3, 4});  // columns [1,2],[2,3],[3,4]
  f.hop = 1;
  f.original_length = 4;
  Waveform w = overlap_add(f);
  REQUIRE(w.length() == 4);
  CHECK(w.samples[0] == 1);
  CHECK(w.samples[1] == 4);
  CHECK(w.samples[2] == 6);
  CHECK(w.samples[3] == 4);
}

TEST_CASE("hop equal to frame length concatenates") {
  Rng rng(6);
  Waveform w = random_wave(50, rng);
  FrameMatrix f = segment(w, 10, 10);
  Waveform back = overlap_add(f);
  REQUIRE(back.length() == w.length());
  for (int i = 0; i < w.length(); ++i) CHECK(back.samples[static_cast<size_t>(i)] == w.samples[static_cast<size_t>(i)]);
}

TEST_CASE("round trip with tail padding truncates to the original length") {
  Rng rng(7);
  Waveform w = random_wave(53, rng);  // not divisible by hop
  FrameMatrix f = segment(w, 10, 10);
  Waveform back = overlap_add(f);
  REQUIRE(back.length() == 53);
  for (int i = 0; i < 53; ++i) CHECK(back.samples[static_cast<size_t>(i)] == w.samples[static_cast<size_t>(i)]);
}

TEST_CASE("half-hop overlap doubles the interior") {
  Rng rng(8);
  Waveform w = random_wave(64, rng);
  const int frame = 8, hop = 4;
  Waveform back = overlap_add(segment(w, frame, hop));
  // rectangular frames at half hop cover each interior sample exactly twice
  for (int t = frame; t < 64 - frame; ++t)
    CHECK(back.samples[static_cast<size_t>(t)] == doctest::Approx(2.0 * w.samples[static_cast<size_t>(t)]).epsilon(1e-12));
  // the very first sample is covered once
  CHECK(back.samples[0] == w.samples[0]);
}

TEST_CASE("segment is linear") {
  Rng rng(9);
  Waveform x = random_wave(40, rng);
  Waveform y = random_wave(40, rng);
  const double a = 1.7, b = -0.3;
  Waveform combo = x;
  for (int i = 0; i < 40; ++i)
    combo.samples[static_cast<size_t>(i)] = a * x.samples[static_cast<size_t>(i)] + b * y.samples[static_cast<size_t>(i)];
  FrameMatrix fc = segment(combo, 8, 3);
  FrameMatrix fx = segment(x, 8, 3);
  FrameMatrix fy = segment(y, 8, 3);
  for (int i = 0; i < fc.frames.size(); ++i)
    CHECK(fc.frames(i) == doctest::Approx(a * fx.frames(i) + b * fy.frames(i)).epsilon(1e-12));
}

TEST_CASE("overlap_add output length is exactly original_length") {
  Rng rng(10);
  for (int len : {17, 32, 33, 100}) {
    Waveform w = random_wave(len, rng);
    FrameMatrix f = segment(w, 8, 4);
    CHECK(overlap_add(f).length() == len);
  }
}
