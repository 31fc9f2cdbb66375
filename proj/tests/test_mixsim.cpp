// tests/test_mixsim.cpp

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

#include <cmath>
#include <limits>

#include "mcmask/fractional_delay.hpp"
#include "mcmask/mixsim.hpp"
#include "mcmask/tensor.hpp"

using namespace mcmask;

namespace {

constexpr double kPi = 3.14159265358979323846;

ArrayGeometry pair_geom(double spacing) {
  ArrayGeometry geom;
  geom.positions = {{-spacing / 2.0, 0.0, 0.0}, {spacing / 2.0, 0.0, 0.0}};
  return geom;
}

// Band-limited test source: random multisine below 0.4 * Nyquist.
Waveform multisine(double duration_s, int rate, Rng& rng) {
  Waveform w;
  w.sample_rate = rate;
  const int n = static_cast<int>(std::lround(duration_s * rate));
  w.samples.assign(static_cast<size_t>(n), 0.0);
  for (int tone = 0; tone < 12; ++tone) {
    const double f = rng.uniform(40.0, 0.2 * rate);
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    const double gain = rng.uniform(0.2, 1.0);
    for (int i = 0; i < n; ++i)
      w.samples[static_cast<size_t>(i)] += gain * std::sin(2.0 * kPi * f * i / rate + phase);
  }
  return w;
}

double relative_l2(const std::vector<double>& a, const std::vector<double>& b, int skip) {
  double err = 0.0, ref = 0.0;
  for (size_t i = static_cast<size_t>(skip); i + static_cast<size_t>(skip) < a.size(); ++i) {
    const double d = a[i] - b[i];
    err += d * d;
    ref += a[i] * a[i];
  }
  return std::sqrt(err / ref);
}

}  // namespace

TEST_CASE("render_anechoic: sensor at the array centre is a bit-exact copy") {
  ArrayGeometry geom;
  geom.positions = {{0.0, 0.0, 0.0}, {0.05, 0.02, 0.0}};
  Rng rng(71);
  Waveform src = multisine(0.1, 16000, rng);
  MultiChannelWaveform out = render_anechoic(src, geom, {0.0, 1.0, 0.0});
  // channel 0 sits at the origin and direction is broadside to both offsets?
  // -- no: compute its delay and only assert when it is exactly zero
  auto delays = steering_delays(geom, {0.0, 1.0, 0.0});
  REQUIRE(delays[0] == 0.0);
  for (int i = 0; i < src.length(); ++i)
    CHECK(out.channels[0].samples[static_cast<size_t>(i)] == src.samples[static_cast<size_t>(i)]);
}

TEST_CASE("cross-correlation of a rendered pair peaks at the geometric delay") {
  // spacing chosen so the inter-channel delay is exactly 3 samples
  const double spacing = 3.0 * 343.0 / 16000.0;
  ArrayGeometry geom = pair_geom(spacing);
  Rng rng(72);
  Waveform src = multisine(0.25, 16000, rng);
  MultiChannelWaveform out = render_anechoic(src, geom, {1.0, 0.0, 0.0});
  const auto delays = steering_delays(geom, {1.0, 0.0, 0.0});
  const double expected_lag = (delays[1] - delays[0]) * 16000.0;

  // integer-lag correlation with parabolic peak interpolation
  const int max_lag = 8;
  double best = -1e300;
  int best_lag = 0;
  std::vector<double> r(static_cast<size_t>(2 * max_lag + 1));
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (int i = max_lag; i < out.length() - max_lag; ++i)
      acc += out.channels[1].samples[static_cast<size_t>(i)] *
             out.channels[0].samples[static_cast<size_t>(i - lag)];
    r[static_cast<size_t>(lag + max_lag)] = acc;
    if (acc > best) {
      best = acc;
      best_lag = lag;
    }
  }
  double refine = 0.0;
  if (best_lag > -max_lag && best_lag < max_lag) {
    const double rm = r[static_cast<size_t>(best_lag - 1 + max_lag)];
    const double r0 = r[static_cast<size_t>(best_lag + max_lag)];
    const double rp = r[static_cast<size_t>(best_lag + 1 + max_lag)];
    refine = 0.5 * (rm - rp) / (rm - 2.0 * r0 + rp);
  }
  CHECK(std::fabs(best_lag + refine - expected_lag) < 0.1);
}

TEST_CASE("fractional delay round trip on band-limited content") {
  Rng rng(73);
  Waveform src = multisine(0.2, 16000, rng);
  const double tau = 2.37e-4;  // a non-integer sample shift
  Waveform there = delay_waveform(src, tau);
  Waveform back = delay_waveform(there, -tau);
  CHECK(relative_l2(src.samples, back.samples, kFractionalDelayTaps) < 1e-4);
}

TEST_CASE("anechoic rendering preserves per-channel energy") {
  ArrayGeometry geom = pair_geom(0.17);
  Rng rng(74);
  Waveform src = multisine(0.3, 16000, rng);
  MultiChannelWaveform out = render_anechoic(src, geom, direction_from_azel_deg(35.0, 10.0));
  const double src_power = sum_squares(src.samples);
  for (const Waveform& ch : out.channels) {
    // ignore the filter-length edge where energy leaks outside the window
    double p = 0.0;
    for (int i = kFractionalDelayTaps; i < ch.length() - kFractionalDelayTaps; ++i)
      p += ch.samples[static_cast<size_t>(i)] * ch.samples[static_cast<size_t>(i)];
    double ref = 0.0;
    for (int i = kFractionalDelayTaps; i < src.length() - kFractionalDelayTaps; ++i)
      ref += src.samples[static_cast<size_t>(i)] * src.samples[static_cast<size_t>(i)];
    CHECK(std::fabs(p / ref - 1.0) < 1e-3);
    (void)src_power;
  }
}

TEST_CASE("scale_to_snr closed-form cases") {
  Rng rng(75);
  MultiChannelWaveform speech, noise;
  speech.channels.push_back(multisine(0.1, 16000, rng));
  noise.channels.push_back(multisine(0.1, 16000, rng));
  // normalize both to equal total power
  const double ps = sum_squares(speech.channels[0].samples);
  const double pn = sum_squares(noise.channels[0].samples);
  for (double& v : speech.channels[0].samples) v /= std::sqrt(ps);
  for (double& v : noise.channels[0].samples) v /= std::sqrt(pn);

  CHECK(scale_to_snr(speech, noise, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(scale_to_snr(speech, noise, 20.0) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("scale_to_snr: recomputed SNR hits the target to 1e-9 dB") {
  Rng rng(76);
  MultiChannelWaveform speech, noise;
  for (int c = 0; c < 2; ++c) {
    speech.channels.push_back(multisine(0.1, 16000, rng));
    noise.channels.push_back(synth_white(0.1, 16000, rng));
  }
  const double g = scale_to_snr(speech, noise, 5.0);
  double ps = 0.0, pn = 0.0;
  for (int c = 0; c < 2; ++c) {
    ps += g * g * sum_squares(speech.channels[static_cast<size_t>(c)].samples);
    pn += sum_squares(noise.channels[static_cast<size_t>(c)].samples);
  }
  CHECK(std::fabs(10.0 * std::log10(ps / pn) - 5.0) < 1e-9);
}

TEST_CASE("scale_to_snr rejects silent noise") {
  Rng rng(77);
  MultiChannelWaveform speech, silent;
  speech.channels.push_back(multisine(0.05, 16000, rng));
  Waveform z;
  z.sample_rate = 16000;
  z.samples.assign(800, 0.0);
  silent.channels.push_back(z);
  CHECK_THROWS_AS(scale_to_snr(speech, silent, 0.0), NumericError);
}

TEST_CASE("crop_noise: full-length crop is the identity") {
  Rng rng(78);
  Waveform noise = synth_white(0.05, 16000, rng);
  Rng crop_rng(1);
  Waveform crop = crop_noise(noise, noise.length(), crop_rng);
  for (int i = 0; i < noise.length(); ++i)
    CHECK(crop.samples[static_cast<size_t>(i)] == noise.samples[static_cast<size_t>(i)]);
}

TEST_CASE("crop_noise is reproducible under a fixed seed") {
  Rng rng(79);
  Waveform noise = synth_white(0.2, 16000, rng);
  Rng a(42), b(42);
  Waveform ca = crop_noise(noise, 500, a);
  Waveform cb = crop_noise(noise, 500, b);
  for (int i = 0; i < 500; ++i)
    CHECK(ca.samples[static_cast<size_t>(i)] == cb.samples[static_cast<size_t>(i)]);
}

TEST_CASE("crop_noise start offsets are uniform (chi-square at the 1% level)") {
  // noise length 1100, crop 100: start in [0, 1000]; 20 bins of width 50
  // (the last bin absorbs offset 1000), 1e4 draws
  Rng src_rng(80);
  Waveform noise = synth_white(1100.0 / 16000.0, 16000, src_rng);
  REQUIRE(noise.length() == 1100);
  Rng rng(4242);
  const int draws = 10000;
  const int bins = 20;
  std::vector<int> hist(bins, 0);
  for (int i = 0; i < draws; ++i) {
    Rng one = Rng::derive(4242, static_cast<std::uint64_t>(i));
    Waveform crop = crop_noise(noise, 100, one);
    // recover the offset by matching the first sample run
    int start = -1;
    for (int s = 0; s + 100 <= 1100; ++s) {
      if (noise.samples[static_cast<size_t>(s)] == crop.samples[0] &&
          noise.samples[static_cast<size_t>(s + 1)] == crop.samples[1]) {
        start = s;
        break;
      }
    }
    REQUIRE(start >= 0);
    hist[static_cast<size_t>(std::min(start / 50, bins - 1))]++;
  }
  (void)rng;
  // expected counts: bins of width 50 out of 1001 possible starts
  double chi2 = 0.0;
  for (int b = 0; b < bins; ++b) {
    const int width = b == bins - 1 ? 51 : 50;
    const double expect = draws * static_cast<double>(width) / 1001.0;
    const double d = hist[static_cast<size_t>(b)] - expect;
    chi2 += d * d / expect;
  }
  // chi-square critical value, 19 degrees of freedom, alpha = 0.01
  CHECK(chi2 < 36.191);
}

TEST_CASE("crop_noise rejects too-short noise") {
  Rng rng(81);
  Waveform noise = synth_white(0.01, 16000, rng);
  Rng crng(1);
  CHECK_THROWS_AS(crop_noise(noise, noise.length() + 1, crng), ShapeError);
}

TEST_CASE("make_scene: mixture minus clean is the noise, bitwise") {
  ArrayGeometry geom = pair_geom(0.1);
  Rng rng(82);
  Waveform src = multisine(0.1, 16000, rng);
  MultiChannelWaveform noise;
  for (int c = 0; c < 2; ++c) noise.channels.push_back(synth_white(0.15, 16000, rng));
  Rng scene_rng(7);
  Scene scene = make_scene(src, noise, geom, direction_from_azel_deg(60.0, 5.0), 5.0, 0, scene_rng);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < scene.mixture.length(); ++i) {
      const double diff = scene.mixture.channels[static_cast<size_t>(c)].samples[static_cast<size_t>(i)] -
                          scene.clean.channels[static_cast<size_t>(c)].samples[static_cast<size_t>(i)];
      CHECK(diff == scene.noise.channels[static_cast<size_t>(c)].samples[static_cast<size_t>(i)]);
    }
}

TEST_CASE("make_scene: recomputed SNR equals the request to 1e-9 dB") {
  ArrayGeometry geom = pair_geom(0.1);
  Rng rng(83);
  Waveform src = multisine(0.1, 16000, rng);
  MultiChannelWaveform noise;
  for (int c = 0; c < 2; ++c) noise.channels.push_back(synth_pink(0.15, 16000, rng));
  Rng scene_rng(8);
  Scene scene = make_scene(src, noise, geom, direction_from_azel_deg(10.0, 0.0), 7.5, 0, scene_rng);
  double ps = 0.0, pn = 0.0;
  for (int c = 0; c < 2; ++c) {
    ps += sum_squares(scene.clean.channels[static_cast<size_t>(c)].samples);
    pn += sum_squares(scene.noise.channels[static_cast<size_t>(c)].samples);
  }
  CHECK(std::fabs(10.0 * std::log10(ps / pn) - 7.5) < 1e-9);
}

TEST_CASE("make_scene honours the noiseless sentinel") {
  ArrayGeometry geom = pair_geom(0.1);
  Rng rng(84);
  Waveform src = multisine(0.1, 16000, rng);
  MultiChannelWaveform noise;
  for (int c = 0; c < 2; ++c) noise.channels.push_back(synth_white(0.15, 16000, rng));
  Rng scene_rng(9);
  Scene scene = make_scene(src, noise, geom, direction_from_azel_deg(0.0, 0.0),
                           std::numeric_limits<double>::infinity(), 0, scene_rng);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < scene.mixture.length(); ++i) {
      CHECK(scene.mixture.channels[static_cast<size_t>(c)].samples[static_cast<size_t>(i)] ==
            scene.clean.channels[static_cast<size_t>(c)].samples[static_cast<size_t>(i)]);
      CHECK(scene.noise.channels[static_cast<size_t>(c)].samples[static_cast<size_t>(i)] == 0.0);
    }
}

TEST_CASE("make_scene is deterministic under a fixed rng") {
  ArrayGeometry geom = pair_geom(0.1);
  Rng rng(85);
  Waveform src = multisine(0.1, 16000, rng);
  MultiChannelWaveform noise;
  for (int c = 0; c < 2; ++c) noise.channels.push_back(synth_white(0.15, 16000, rng));
  Rng r1(11), r2(11);
  Scene s1 = make_scene(src, noise, geom, direction_from_azel_deg(45.0, 0.0), 5.0, 0, r1);
  Scene s2 = make_scene(src, noise, geom, direction_from_azel_deg(45.0, 0.0), 5.0, 0, r2);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < s1.mixture.length(); ++i)
      CHECK(s1.mixture.channels[static_cast<size_t>(c)].samples[static_cast<size_t>(i)] ==
            s2.mixture.channels[static_cast<size_t>(c)].samples[static_cast<size_t>(i)]);
}

TEST_CASE("directional noise field carries the geometry's channel count") {
  ArrayGeometry geom = pair_geom(0.1);
  Rng rng(86);
  const Direction dir = direction_from_azel_deg(200.0, -10.0);
  MultiChannelWaveform field =
      synth_noise_field(NoiseFieldKind::kDirectionalPink, 2, 0.1, 16000, rng, &geom, &dir);
  CHECK(field.num_channels() == 2);
  field.validate();
  CHECK_THROWS_AS(synth_noise_field(NoiseFieldKind::kDirectionalWhite, 2, 0.1, 16000, rng),
                  ConfigError);
}
