// tests/test_metrics.cpp

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

#include "mcmask/metrics.hpp"
#include "mcmask/rng.hpp"

using namespace mcmask;

namespace {

Waveform random_wave(int length, Rng& rng) {
  Waveform w;
  w.samples.resize(static_cast<size_t>(length));
  for (double& v : w.samples) v = rng.uniform(-1.0, 1.0);
  return w;
}

Waveform scale_wave(const Waveform& w, double s) {
  Waveform out = w;
  for (double& v : out.samples) v *= s;
  return out;
}

}  // namespace

TEST_CASE("sdr of a perfect estimate caps at 300 dB") {
  Rng rng(90);
  Waveform ref = random_wave(256, rng);
  CHECK(sdr_db(ref, ref) == 300.0);
}

TEST_CASE("sdr of a doubled estimate is zero dB") {
  Rng rng(91);
  Waveform ref = random_wave(256, rng);
  CHECK(sdr_db(ref, scale_wave(ref, 2.0)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sdr analytic one-percent error case") {
  Rng rng(92);
  Waveform ref = random_wave(256, rng);
  Waveform est = ref;
  for (double& v : est.samples) v *= 1.1;  // error energy = ref energy / 100
  CHECK(sdr_db(ref, est) == doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("sdr rejects a zero reference") {
  Waveform zero;
  zero.samples.assign(64, 0.0);
  Waveform est;
  est.samples.assign(64, 1.0);
  CHECK_THROWS_AS(sdr_db(zero, est), NumericError);
}

TEST_CASE("sdr decreases as the error grows in a fixed direction") {
  Rng rng(93);
  Waveform ref = random_wave(512, rng);
  Waveform dir = random_wave(512, rng);
  double last = 1e300;
  for (double eps : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    Waveform est = ref;
    for (size_t i = 0; i < est.samples.size(); ++i) est.samples[i] += eps * dir.samples[i];
    const double v = sdr_db(ref, est);
    CHECK(v < last);
    last = v;
  }
}

TEST_CASE("si_sdr removes scale") {
  Rng rng(94);
  Waveform ref = random_wave(256, rng);
  CHECK(si_sdr_db(ref, scale_wave(ref, 2.0)) == 300.0);
  CHECK(si_sdr_db(ref, scale_wave(ref, 0.037)) == 300.0);
}

TEST_CASE("si_sdr of an orthogonal estimate caps at -300 dB") {
  Waveform ref, est;
  ref.samples = {1.0, 0.0, 1.0, 0.0};
  est.samples = {0.0, 1.0, 0.0, -1.0};
  CHECK(si_sdr_db(ref, est) == -300.0);
}

TEST_CASE("si_sdr Pythagorean case is ten dB") {
  // est = ref + e with e orthogonal and a tenth of the energy
  Waveform ref, est;
  const int n = 512;
  ref.samples.resize(n);
  est.samples.resize(n);
  Rng rng(95);
  for (int i = 0; i < n; i += 2) {
    ref.samples[static_cast<size_t>(i)] = rng.uniform(-1.0, 1.0);
    ref.samples[static_cast<size_t>(i + 1)] = 0.0;
  }
  // orthogonal error lives on the odd samples
  double ref_power = sum_squares(ref.samples);
  double err_power = 0.0;
  std::vector<double> e(n, 0.0);
  for (int i = 1; i < n; i += 2) {
    e[static_cast<size_t>(i)] = rng.uniform(-1.0, 1.0);
    err_power += e[static_cast<size_t>(i)] * e[static_cast<size_t>(i)];
  }
  const double g = std::sqrt(ref_power / (10.0 * err_power));
  for (int i = 0; i < n; ++i) est.samples[static_cast<size_t>(i)] = ref.samples[static_cast<size_t>(i)] + g * e[static_cast<size_t>(i)];
  CHECK(si_sdr_db(ref, est) == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("si_sdr is invariant to positive scaling of the estimate") {
  Rng rng(96);
  Waveform ref = random_wave(256, rng);
  Waveform est = random_wave(256, rng);
  const double base = si_sdr_db(ref, est);
  for (double s : {0.1, 3.0, 42.0}) CHECK(si_sdr_db(ref, scale_wave(est, s)) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("power_ratio basics") {
  Rng rng(97);
  Waveform z = random_wave(300, rng);
  CHECK(power_ratio(z, z, 10) == doctest::Approx(1.0));
  CHECK(power_ratio(scale_wave(z, 0.5), z, 10) == doctest::Approx(0.25).epsilon(1e-12));
  Waveform zero = z;
  for (double& v : zero.samples) v = 0.0;
  CHECK(power_ratio(zero, z, 10) == 0.0);
}

TEST_CASE("power_ratio is quadratic in the numerator scale") {
  Rng rng(98);
  Waveform z = random_wave(300, rng);
  Waveform y = random_wave(300, rng);
  const double base = power_ratio(y, z, 5);
  CHECK(power_ratio(scale_wave(y, 3.0), z, 5) == doctest::Approx(9.0 * base).epsilon(1e-12));
}

TEST_CASE("power_ratio rejects a degenerate interior") {
  Rng rng(99);
  Waveform z = random_wave(20, rng);
  CHECK_THROWS_AS(power_ratio(z, z, 10), ShapeError);
  CHECK_THROWS_AS(power_ratio(z, z, -1), ShapeError);
}

TEST_CASE("metric report means and JSON shape") {
  MetricReport report;
  report.scenes.push_back({"a", 10.0, 11.0, 5.0});
  report.scenes.push_back({"b", 20.0, 21.0, 7.0});
  report.finalize();
  CHECK(report.mean_sdr_db == doctest::Approx(15.0));
  CHECK(report.mean_si_sdr_db == doctest::Approx(16.0));
  CHECK(report.mean_input_sdr_db == doctest::Approx(6.0));
  const std::string text = metric_report_to_json(report);
  CHECK(text.find("\"mean_sdr_db\"") != std::string::npos);
  CHECK(text.find("\"scenes\"") != std::string::npos);
}
