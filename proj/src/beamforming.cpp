// src/beamforming.cpp

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

#include "mcmask/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "mcmask/fractional_delay.hpp"
#include "mcmask/metrics.hpp"

namespace mcmask {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double ArrayGeometry::radius() const {
  double r = 0.0;
  for (const Direction& p : positions)
    r = std::max(r, std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
  return r;
}

void ArrayGeometry::validate(int min_channels) const {
  if (num_channels() < min_channels)
    throw ConfigError("array geometry needs at least " + std::to_string(min_channels) + " sensors");
  for (const Direction& p : positions)
    for (double v : p)
      if (!std::isfinite(v)) throw ConfigError("array geometry has non-finite coordinates");
  if (!(speed_of_sound > 0.0)) throw ConfigError("speed of sound must be positive");
}

DirectionGrid make_grid(int count) {
  if (count < 1) throw ConfigError("make_grid: need at least one direction");
  DirectionGrid grid;
  grid.directions.reserve(static_cast<size_t>(count));
  // Golden-angle spiral over z in (-1, 1): near-uniform and deterministic.
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * kPi * std::fmod(static_cast<double>(i) * (golden - 1.0), 1.0);
    grid.directions.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return grid;
}

Direction direction_from_azel_deg(double azimuth_deg, double elevation_deg) {
  const double az = azimuth_deg * kPi / 180.0;
  const double el = elevation_deg * kPi / 180.0;
  return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

void azel_deg_from_direction(const Direction& dir, double* azimuth_deg, double* elevation_deg) {
  double az = std::atan2(dir[1], dir[0]) * 180.0 / kPi;
  if (az < 0.0) az += 360.0;
  const double el = std::asin(std::clamp(dir[2], -1.0, 1.0)) * 180.0 / kPi;
  if (azimuth_deg) *azimuth_deg = az;
  if (elevation_deg) *elevation_deg = el;
}

double angle_between_deg(const Direction& a, const Direction& b) {
  const double d = std::clamp(a[0] * b[0] + a[1] * b[1] + a[2] * b[2], -1.0, 1.0);
  return std::acos(d) * 180.0 / kPi;
}

std::vector<double> steering_delays(const ArrayGeometry& geom, const Direction& dir) {
  geom.validate();
  std::vector<double> delays;
  delays.reserve(geom.positions.size());
  for (const Direction& p : geom.positions) {
    const double projection = p[0] * dir[0] + p[1] * dir[1] + p[2] * dir[2];
    delays.push_back(-projection / geom.speed_of_sound);
  }
  return delays;
}

MultiChannelWaveform render_probe(double freq_hz, double duration_s, const ArrayGeometry& geom,
                                  const Direction& dir, int sample_rate) {
  if (!(freq_hz > 0.0) || freq_hz >= 0.5 * sample_rate)
    throw ConfigError("render_probe: frequency must lie below Nyquist");
  const int n = static_cast<int>(std::lround(duration_s * sample_rate));
  if (n < 1) throw ConfigError("render_probe: duration too short");
  const std::vector<double> delays = steering_delays(geom, dir);

  MultiChannelWaveform out;
  const double w = 2.0 * kPi * freq_hz;
  for (double tau : delays) {
    Waveform ch;
    ch.sample_rate = sample_rate;
    ch.samples.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      ch.samples[static_cast<size_t>(i)] = std::sin(w * (static_cast<double>(i) / sample_rate - tau));
    out.channels.push_back(std::move(ch));
  }
  return out;
}

Waveform delay_and_sum(const MultiChannelWaveform& mix, std::span<const double> delays) {
  mix.validate();
  if (static_cast<int>(delays.size()) != mix.num_channels())
    throw ShapeError("delay_and_sum: one delay per channel required");
  const int n = mix.length();
  const int rate = mix.sample_rate();
  Waveform out;
  out.sample_rate = rate;
  out.samples.assign(static_cast<size_t>(n), 0.0);
  const double gain = 1.0 / mix.num_channels();
  for (int c = 0; c < mix.num_channels(); ++c) {
    // advance by the steering delay to align the steered direction
    std::vector<double> shifted =
        fractional_delay(mix.channels[static_cast<size_t>(c)].samples, -delays[static_cast<size_t>(c)] * rate);
    for (int i = 0; i < n; ++i) out.samples[static_cast<size_t>(i)] += gain * shifted[static_cast<size_t>(i)];
  }
  return out;
}

SpatialSystem make_das_system(const ArrayGeometry& geom, const Direction& steer) {
  std::vector<double> delays = steering_delays(geom, steer);
  return [delays](const MultiChannelWaveform& mix) { return delay_and_sum(mix, delays); };
}

SpatialSystem make_channel_passthrough(int channel) {
  return [channel](const MultiChannelWaveform& mix) {
    if (channel < 0 || channel >= mix.num_channels())
      throw ShapeError("passthrough: channel out of range");
    return mix.channels[static_cast<size_t>(channel)];
  };
}

Waveform MaskedFilterbankSystem::operator()(const MultiChannelWaveform& mix) const {
  mix.validate();
  if (mix.num_channels() != masks.num_channels())
    throw ShapeError("masked system: channel count mismatch");
  MultiChannelRepresentation reps;
  for (int c = 0; c < mix.num_channels(); ++c) {
    FrameMatrix frames = segment(mix.channels[static_cast<size_t>(c)], frame_length, hop);
    reps.channels.push_back(encode(frames, encoder, c));
  }
  if (!reps.channels.front().values.same_shape(masks.masks.front()))
    throw ShapeError("masked system: probe frame count " +
                     std::to_string(reps.channels.front().num_frames()) +
                     " does not match frozen masks");
  return decode(filter_and_sum(masks, reps), decoder);
}

Beampattern beampattern_sweep(const SpatialSystem& system, const ArrayGeometry& geom,
                              const DirectionGrid& grid, double freq_hz, double duration_s,
                              int sample_rate, int exclude_edge_samples, int num_threads) {
  geom.validate(2);
  if (grid.size() < 1) throw ConfigError("beampattern_sweep: empty grid");
  Beampattern bp;
  bp.freq_hz = freq_hz;
  bp.response.assign(static_cast<size_t>(grid.size()), 0.0);

  // Reference tone z(n), the undelayed probe.
  const int n = static_cast<int>(std::lround(duration_s * sample_rate));
  Waveform reference;
  reference.sample_rate = sample_rate;
  reference.samples.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    reference.samples[static_cast<size_t>(i)] =
        std::sin(2.0 * kPi * freq_hz * static_cast<double>(i) / sample_rate);

  auto sweep_range = [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      MultiChannelWaveform probe =
          render_probe(freq_hz, duration_s, geom, grid.directions[static_cast<size_t>(k)], sample_rate);
      Waveform y = system(probe);
      if (y.length() != n)
        throw ShapeError("beampattern_sweep: system changed the signal length");
      bp.response[static_cast<size_t>(k)] = power_ratio(y, reference, exclude_edge_samples);
    }
  };

  int threads = num_threads > 0 ? num_threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, grid.size());
  if (threads == 1) {
    sweep_range(0, grid.size());
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
    const int chunk = (grid.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(grid.size(), begin + chunk);
      pool.emplace_back([&, t, begin, end] {
        try {
          sweep_range(begin, end);
        } catch (...) {
          errors[static_cast<size_t>(t)] = std::current_exception();
        }
      });
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return bp;
}

void write_beampattern_csv(const std::string& path, const DirectionGrid& grid,
                           const Beampattern& bp) {
  if (grid.size() != static_cast<int>(bp.response.size()))
    throw ShapeError("write_beampattern_csv: grid/response size mismatch");
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << "k,azimuth_deg,elevation_deg,b_linear,b_db\n";
  out.precision(12);
  for (int k = 0; k < grid.size(); ++k) {
    double az = 0.0, el = 0.0;
    azel_deg_from_direction(grid.directions[static_cast<size_t>(k)], &az, &el);
    const double b = bp.response[static_cast<size_t>(k)];
    const double db = std::clamp(10.0 * std::log10(std::max(b, 1e-30)), -300.0, 300.0);
    out << k << "," << az << "," << el << "," << b << "," << db << "\n";
  }
  if (!out) throw DataError("write failed: " + path);
}

std::string beampattern_to_json(const DirectionGrid& grid, const Beampattern& bp,
                                const std::string& system_description,
                                const std::string& extra_metadata_json) {
  if (grid.size() != static_cast<int>(bp.response.size()))
    throw ShapeError("beampattern_to_json: grid/response size mismatch");
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(extra_metadata_json);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("beampattern_to_json: bad metadata: ") + e.what());
  }
  meta["freq_hz"] = bp.freq_hz;
  meta["grid_k"] = grid.size();
  meta["system"] = system_description;
  nlohmann::json j;
  j["version"] = 1;
  j["metadata"] = meta;
  j["directions"] = nlohmann::json::array();
  for (const Direction& d : grid.directions) j["directions"].push_back({d[0], d[1], d[2]});
  j["response"] = bp.response;
  return j.dump(1);
}

}  // namespace mcmask
