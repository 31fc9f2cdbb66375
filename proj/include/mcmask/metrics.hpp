// include/mcmask/metrics.hpp

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

#ifndef MCMASK_METRICS_HPP
#define MCMASK_METRICS_HPP

#include <string>
#include <vector>

#include "mcmask/framing.hpp"

namespace mcmask {

// All metric outputs are capped to +-300 dB so reports stay serializable.
inline constexpr double kMetricCapDb = 300.0;

// 10*log10(sum(ref^2) / sum((ref-est)^2)).
double sdr_db(const Waveform& ref, const Waveform& est);

// Scale-invariant variant: project est onto ref (alpha = <est,ref>/<ref,ref>)
// and score est against alpha*ref.
double si_sdr_db(const Waveform& ref, const Waveform& est);

// sum(y^2)/sum(z^2) over the interior, `exclude_edges` samples dropped from
// both ends.
double power_ratio(const Waveform& y, const Waveform& z, int exclude_edges);

struct SceneMetrics {
  std::string id;
  double sdr_db = 0.0;
  double si_sdr_db = 0.0;
  double input_sdr_db = 0.0;  // mixture reference channel scored as the estimate
};

struct MetricReport {
  std::vector<SceneMetrics> scenes;
  double mean_sdr_db = 0.0;
  double mean_si_sdr_db = 0.0;
  double mean_input_sdr_db = 0.0;

  void finalize();  // fill the means
};

std::string metric_report_to_json(const MetricReport& report);

}  // namespace mcmask

#endif  // MCMASK_METRICS_HPP
