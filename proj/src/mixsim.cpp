// src/mixsim.cpp

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

#include "mcmask/mixsim.hpp"

#include <cmath>

#include "mcmask/fractional_delay.hpp"
#include "mcmask/tensor.hpp"

namespace mcmask {

namespace {
constexpr double kPi = 3.14159265358979323846;

double total_power(const MultiChannelWaveform& w) {
  double p = 0.0;
  for (const Waveform& ch : w.channels) p += sum_squares(ch.samples);
  return p;
}
}  // namespace

MultiChannelWaveform render_anechoic(const Waveform& src, const ArrayGeometry& geom,
                                     const Direction& dir) {
  geom.validate();
  const std::vector<double> delays = steering_delays(geom, dir);
  MultiChannelWaveform out;
  for (double tau : delays) out.channels.push_back(delay_waveform(src, tau));
  return out;
}

double scale_to_snr(const MultiChannelWaveform& speech, const MultiChannelWaveform& noise,
                    double target_db) {
  speech.validate();
  noise.validate();
  const double p_speech = total_power(speech);
  const double p_noise = total_power(noise);
  if (p_noise <= 0.0) throw NumericError("scale_to_snr: noise is silent");
  if (p_speech <= 0.0) throw NumericError("scale_to_snr: speech is silent");
  return std::sqrt(p_noise / p_speech * std::pow(10.0, target_db / 10.0));
}

Waveform crop_noise(const Waveform& noise, int length, Rng& rng) {
  if (length < 1) throw ShapeError("crop_noise: length must be >= 1");
  if (noise.length() < length)
    throw ShapeError("crop_noise: noise shorter than requested length");
  const int start = static_cast<int>(rng.uniform_int(0, noise.length() - length));
  Waveform out;
  out.sample_rate = noise.sample_rate;
  out.samples.assign(noise.samples.begin() + start, noise.samples.begin() + start + length);
  return out;
}

MultiChannelWaveform crop_noise(const MultiChannelWaveform& noise, int length, Rng& rng) {
  noise.validate();
  if (length < 1) throw ShapeError("crop_noise: length must be >= 1");
  if (noise.length() < length)
    throw ShapeError("crop_noise: noise shorter than requested length");
  const int start = static_cast<int>(rng.uniform_int(0, noise.length() - length));
  MultiChannelWaveform out;
  for (const Waveform& ch : noise.channels) {
    Waveform c;
    c.sample_rate = ch.sample_rate;
    c.samples.assign(ch.samples.begin() + start, ch.samples.begin() + start + length);
    out.channels.push_back(std::move(c));
  }
  return out;
}

Scene make_scene(const Waveform& speech_src, const MultiChannelWaveform& noise_src,
                 const ArrayGeometry& geom, const Direction& dir, double snr_db,
                 int reference_channel, Rng& rng) {
  if (reference_channel < 0 || reference_channel >= geom.num_channels())
    throw ConfigError("make_scene: reference channel out of range");
  Scene scene;
  scene.source_doa = dir;
  scene.snr_db = snr_db;
  scene.reference_channel = reference_channel;

  scene.clean = render_anechoic(speech_src, geom, dir);
  scene.noise = crop_noise(noise_src, scene.clean.length(), rng);

  if (std::isinf(snr_db) && snr_db > 0.0) {
    // noiseless sentinel
    for (Waveform& ch : scene.noise.channels) std::fill(ch.samples.begin(), ch.samples.end(), 0.0);
  } else {
    const double gain = scale_to_snr(scene.clean, scene.noise, snr_db);
    for (Waveform& ch : scene.clean.channels)
      for (double& v : ch.samples) v *= gain;
  }

  scene.mixture = scene.clean;
  for (int c = 0; c < scene.mixture.num_channels(); ++c) {
    auto& mix = scene.mixture.channels[static_cast<size_t>(c)].samples;
    auto& noise = scene.noise.channels[static_cast<size_t>(c)].samples;
    for (size_t i = 0; i < mix.size(); ++i) {
      const double clean = mix[i];
      mix[i] = clean + noise[i];
      // store the noise the mixture actually carries (one rounding away from
      // the rendered noise) so mixture - clean == noise holds sample-exactly
      noise[i] = mix[i] - clean;
    }
  }
  return scene;
}

Waveform synth_white(double duration_s, int sample_rate, Rng& rng) {
  Waveform w;
  w.sample_rate = sample_rate;
  const int n = static_cast<int>(std::lround(duration_s * sample_rate));
  w.samples.resize(static_cast<size_t>(n));
  for (double& v : w.samples) v = rng.uniform(-1.0, 1.0);
  return w;
}

Waveform synth_pink(double duration_s, int sample_rate, Rng& rng) {
  Waveform w;
  w.sample_rate = sample_rate;
  const int n = static_cast<int>(std::lround(duration_s * sample_rate));
  w.samples.resize(static_cast<size_t>(n));
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  for (double& v : w.samples) {
    const double white = rng.uniform(-1.0, 1.0);
    b0 = 0.99765 * b0 + white * 0.0990460;
    b1 = 0.96300 * b1 + white * 0.2965164;
    b2 = 0.57000 * b2 + white * 1.0526913;
    v = 0.25 * (b0 + b1 + b2 + white * 0.1848);
  }
  return w;
}

Waveform synth_tone_complex(double duration_s, int sample_rate, Rng& rng) {
  Waveform w;
  w.sample_rate = sample_rate;
  const int n = static_cast<int>(std::lround(duration_s * sample_rate));
  w.samples.assign(static_cast<size_t>(n), 0.0);

  const double f0 = rng.uniform(110.0, 280.0);
  const int harmonics = 8;
  const double envelope_hz = rng.uniform(1.5, 4.0);
  const double envelope_phase = rng.uniform(0.0, 2.0 * kPi);
  std::vector<double> phases, gains;
  for (int h = 1; h <= harmonics; ++h) {
    phases.push_back(rng.uniform(0.0, 2.0 * kPi));
    gains.push_back(1.0 / h);
  }
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    double s = 0.0;
    for (int h = 1; h <= harmonics; ++h) {
      const double f = f0 * h;
      if (f >= 0.45 * sample_rate) break;
      s += gains[static_cast<size_t>(h - 1)] * std::sin(2.0 * kPi * f * t + phases[static_cast<size_t>(h - 1)]);
    }
    const double env = 0.55 + 0.45 * std::sin(2.0 * kPi * envelope_hz * t + envelope_phase);
    w.samples[static_cast<size_t>(i)] = 0.3 * env * s;
  }
  return w;
}

MultiChannelWaveform synth_noise_field(NoiseFieldKind kind, int num_channels, double duration_s,
                                       int sample_rate, Rng& rng, const ArrayGeometry* geom,
                                       const Direction* noise_dir) {
  MultiChannelWaveform out;
  switch (kind) {
    case NoiseFieldKind::kDiffuseWhite:
      for (int c = 0; c < num_channels; ++c) out.channels.push_back(synth_white(duration_s, sample_rate, rng));
      return out;
    case NoiseFieldKind::kDiffusePink:
      for (int c = 0; c < num_channels; ++c) out.channels.push_back(synth_pink(duration_s, sample_rate, rng));
      return out;
    case NoiseFieldKind::kDirectionalWhite:
    case NoiseFieldKind::kDirectionalPink: {
      if (!geom || !noise_dir)
        throw ConfigError("synth_noise_field: directional noise needs geometry and direction");
      if (geom->num_channels() != num_channels)
        throw ConfigError("synth_noise_field: geometry channel count mismatch");
      Waveform src = kind == NoiseFieldKind::kDirectionalWhite
                         ? synth_white(duration_s, sample_rate, rng)
                         : synth_pink(duration_s, sample_rate, rng);
      return render_anechoic(src, *geom, *noise_dir);
    }
  }
  throw ConfigError("synth_noise_field: unknown kind");
}

}  // namespace mcmask
