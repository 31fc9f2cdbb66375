// src/metrics.cpp

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

#include "mcmask/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "mcmask/tensor.hpp"

namespace mcmask {

namespace {

double cap_db(double ratio) {
  if (ratio <= 0.0) return -kMetricCapDb;
  return std::clamp(10.0 * std::log10(ratio), -kMetricCapDb, kMetricCapDb);
}

}  // namespace

double sdr_db(const Waveform& ref, const Waveform& est) {
  if (ref.length() != est.length()) throw ShapeError("sdr: length mismatch");
  const double ref_power = sum_squares(ref.samples);
  if (ref_power == 0.0) throw NumericError("sdr: reference is all-zero");
  double err_power = 0.0;
  for (size_t i = 0; i < ref.samples.size(); ++i) {
    const double d = ref.samples[i] - est.samples[i];
    err_power += d * d;
  }
  if (err_power == 0.0) return kMetricCapDb;
  return cap_db(ref_power / err_power);
}

double si_sdr_db(const Waveform& ref, const Waveform& est) {
  if (ref.length() != est.length()) throw ShapeError("si_sdr: length mismatch");
  const double ref_power = sum_squares(ref.samples);
  if (ref_power == 0.0) throw NumericError("si_sdr: reference is all-zero");
  const double alpha = dot(est.samples, ref.samples) / ref_power;
  const double target_power = alpha * alpha * ref_power;
  double err_power = 0.0;
  for (size_t i = 0; i < ref.samples.size(); ++i) {
    const double d = est.samples[i] - alpha * ref.samples[i];
    err_power += d * d;
  }
  if (target_power == 0.0) return -kMetricCapDb;  // est orthogonal to ref
  if (err_power == 0.0) return kMetricCapDb;
  return cap_db(target_power / err_power);
}

double power_ratio(const Waveform& y, const Waveform& z, int exclude_edges) {
  if (y.length() != z.length()) throw ShapeError("power_ratio: length mismatch");
  if (exclude_edges < 0) throw ShapeError("power_ratio: negative edge exclusion");
  const int n = y.length();
  if (n <= 2 * exclude_edges) throw ShapeError("power_ratio: interior region is empty");
  double num = 0.0, den = 0.0;
  for (int i = exclude_edges; i < n - exclude_edges; ++i) {
    num += y.samples[static_cast<size_t>(i)] * y.samples[static_cast<size_t>(i)];
    den += z.samples[static_cast<size_t>(i)] * z.samples[static_cast<size_t>(i)];
  }
  if (den == 0.0) throw NumericError("power_ratio: reference power is zero in the interior");
  return num / den;
}

void MetricReport::finalize() {
  mean_sdr_db = mean_si_sdr_db = mean_input_sdr_db = 0.0;
  if (scenes.empty()) return;
  for (const SceneMetrics& s : scenes) {
    mean_sdr_db += s.sdr_db;
    mean_si_sdr_db += s.si_sdr_db;
    mean_input_sdr_db += s.input_sdr_db;
  }
  const double inv = 1.0 / static_cast<double>(scenes.size());
  mean_sdr_db *= inv;
  mean_si_sdr_db *= inv;
  mean_input_sdr_db *= inv;
}

std::string metric_report_to_json(const MetricReport& report) {
  nlohmann::json j;
  j["version"] = 1;
  j["mean_sdr_db"] = report.mean_sdr_db;
  j["mean_si_sdr_db"] = report.mean_si_sdr_db;
  j["mean_input_sdr_db"] = report.mean_input_sdr_db;
  j["scenes"] = nlohmann::json::array();
  for (const SceneMetrics& s : report.scenes) {
    j["scenes"].push_back({{"id", s.id},
                           {"sdr_db", s.sdr_db},
                           {"si_sdr_db", s.si_sdr_db},
                           {"input_sdr_db", s.input_sdr_db}});
  }
  return j.dump(2);
}

}  // namespace mcmask
