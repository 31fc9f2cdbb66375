// include/mcmask/mixsim.hpp

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

#ifndef MCMASK_MIXSIM_HPP
#define MCMASK_MIXSIM_HPP

#include "mcmask/beamforming.hpp"
#include "mcmask/framing.hpp"
#include "mcmask/rng.hpp"

namespace mcmask {

// Synthetic multi-channel scene: mixture = clean + noise, sample for sample.
struct Scene {
  MultiChannelWaveform clean;
  MultiChannelWaveform noise;
  MultiChannelWaveform mixture;
  Direction source_doa{1.0, 0.0, 0.0};
  double snr_db = 0.0;
  int reference_channel = 0;
};

// Static plane-wave rendering: channel c is the source delayed by its
// steering delay (windowed-sinc fractional delay).
MultiChannelWaveform render_anechoic(const Waveform& src, const ArrayGeometry& geom,
                                     const Direction& dir);

// Gain g on the speech such that 10*log10(g^2 * P_speech / P_noise) hits the
// target, with powers totalled across channels and samples.
double scale_to_snr(const MultiChannelWaveform& speech, const MultiChannelWaveform& noise,
                    double target_db);

// Contiguous random crop; multi-channel overload applies one offset to all
// channels.
Waveform crop_noise(const Waveform& noise, int length, Rng& rng);
MultiChannelWaveform crop_noise(const MultiChannelWaveform& noise, int length, Rng& rng);

// Render speech anechoically, crop the noise to the speech length, scale the
// speech to the target SNR, add. snr_db = +inf zeroes the noise.
Scene make_scene(const Waveform& speech_src, const MultiChannelWaveform& noise_src,
                 const ArrayGeometry& geom, const Direction& dir, double snr_db,
                 int reference_channel, Rng& rng);

// ---- toy signal synthesis ----------------------------------------------

Waveform synth_white(double duration_s, int sample_rate, Rng& rng);
// Paul Kellet's three-pole pinking filter on white noise.
Waveform synth_pink(double duration_s, int sample_rate, Rng& rng);
// Harmonic complex with a random fundamental and a slow amplitude envelope; a
// stand-in for voiced speech at desk scale.
Waveform synth_tone_complex(double duration_s, int sample_rate, Rng& rng);

enum class NoiseFieldKind { kDiffuseWhite, kDiffusePink, kDirectionalWhite, kDirectionalPink };

// Diffuse fields draw independent noise per channel; directional fields
// render one noise source from `noise_dir` through the array.
MultiChannelWaveform synth_noise_field(NoiseFieldKind kind, int num_channels, double duration_s,
                                       int sample_rate, Rng& rng, const ArrayGeometry* geom = nullptr,
                                       const Direction* noise_dir = nullptr);

}  // namespace mcmask

#endif  // MCMASK_MIXSIM_HPP
