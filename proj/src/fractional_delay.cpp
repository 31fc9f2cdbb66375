// src/fractional_delay.cpp

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

#include "mcmask/fractional_delay.hpp"

#include <cmath>

namespace mcmask {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

}  // namespace

std::vector<double> fractional_delay(std::span<const double> x, double delay_samples) {
  const int n = static_cast<int>(x.size());
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  const double shift_int_d = std::floor(delay_samples);
  const int shift_int = static_cast<int>(shift_int_d);
  const double frac = delay_samples - shift_int_d;  // in [0, 1)

  if (frac == 0.0) {
    // integer shift: exact sample moves, no interpolation
    for (int i = 0; i < n; ++i) {
      const int src = i - shift_int;
      if (src >= 0 && src < n) out[static_cast<size_t>(i)] = x[static_cast<size_t>(src)];
    }
    return out;
  }

  // Hann-windowed sinc centred on the fractional offset; taps j in
  // [-taps/2 + 1, taps/2] so the argument stays inside the window support.
  constexpr int half = kFractionalDelayTaps / 2;
  double taps[kFractionalDelayTaps];
  for (int j = -half + 1; j <= half; ++j) {
    const double arg = static_cast<double>(j) - frac;
    const double window = 0.5 * (1.0 + std::cos(kPi * arg / half));
    taps[j + half - 1] = sinc(arg) * window;
  }

  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = -half + 1; j <= half; ++j) {
      const int src = i - shift_int - j;
      if (src >= 0 && src < n) acc += x[static_cast<size_t>(src)] * taps[j + half - 1];
    }
    out[static_cast<size_t>(i)] = acc;
  }
  return out;
}

Waveform delay_waveform(const Waveform& w, double delay_seconds) {
  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples = fractional_delay(w.samples, delay_seconds * w.sample_rate);
  return out;
}

}  // namespace mcmask
