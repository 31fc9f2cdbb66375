// include/mcmask/fractional_delay.hpp

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

#ifndef MCMASK_FRACTIONAL_DELAY_HPP
#define MCMASK_FRACTIONAL_DELAY_HPP

#include <span>
#include <vector>

#include "mcmask/framing.hpp"

namespace mcmask {

// Number of taps of the Hann-windowed sinc interpolator.
inline constexpr int kFractionalDelayTaps = 64;

// Shift a signal by an arbitrary (possibly negative, possibly fractional)
// number of samples using a 64-tap Hann-windowed sinc. Samples outside the
// input are treated as zero, so the first/last taps-worth of output is
// transient. Output length equals input length.
std::vector<double> fractional_delay(std::span<const double> x, double delay_samples);

Waveform delay_waveform(const Waveform& w, double delay_seconds);

}  // namespace mcmask

#endif  // MCMASK_FRACTIONAL_DELAY_HPP
