// include/mcmask/beamforming.hpp

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

#ifndef MCMASK_BEAMFORMING_HPP
#define MCMASK_BEAMFORMING_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "mcmask/framing.hpp"
#include "mcmask/masking.hpp"

namespace mcmask {

using Direction = std::array<double, 3>;  // unit vector, array centre to source

struct ArrayGeometry {
  std::vector<Direction> positions;  // metres, array-centred coordinates
  double speed_of_sound = 343.0;

  int num_channels() const { return static_cast<int>(positions.size()); }
  double radius() const;  // largest sensor distance from the origin
  void validate(int min_channels = 1) const;
};

struct DirectionGrid {
  std::vector<Direction> directions;

  int size() const { return static_cast<int>(directions.size()); }
};

// Power response per grid direction at one probe frequency, linear ratio.
struct Beampattern {
  std::vector<double> response;
  double freq_hz = 0.0;
};

// Spherical Fibonacci lattice of K near-uniform unit directions;
// deterministic.
DirectionGrid make_grid(int count);

// Azimuth measured in degrees from +x towards +y in [0, 360); elevation in
// degrees from the horizontal plane in [-90, 90].
Direction direction_from_azel_deg(double azimuth_deg, double elevation_deg);
void azel_deg_from_direction(const Direction& dir, double* azimuth_deg, double* elevation_deg);
double angle_between_deg(const Direction& a, const Direction& b);

// Plane-wave delays in seconds, one per channel, relative to the array
// centre: tau_c = -(p_c . dir) / speed_of_sound. The wavefront reaches the
// far-side sensor last (positive delay).
std::vector<double> steering_delays(const ArrayGeometry& geom, const Direction& dir);

// Multi-channel pure tone from direction `dir`, rendered with exact analytic
// phase shifts: channel c is sin(2*pi*f*(n/sample_rate - tau_c)).
MultiChannelWaveform render_probe(double freq_hz, double duration_s, const ArrayGeometry& geom,
                                  const Direction& dir, int sample_rate);

// (1/C) * sum_c of channel c advanced by delays[c] (windowed-sinc fractional
// delay), i.e. channels aligned for the direction the delays were computed
// from.
Waveform delay_and_sum(const MultiChannelWaveform& mix, std::span<const double> delays);

// Any system under spatial-response analysis: multi-channel in, single out.
using SpatialSystem = std::function<Waveform(const MultiChannelWaveform&)>;

SpatialSystem make_das_system(const ArrayGeometry& geom, const Direction& steer);
SpatialSystem make_channel_passthrough(int channel);

// Encoder -> frozen mask set -> decoder, the masking pipeline under analysis.
// Probe length must produce the frame count the masks were computed for.
struct MaskedFilterbankSystem {
  EncoderBank encoder;
  DecoderBank decoder;
  MaskSet masks;
  int frame_length = 0;
  int hop = 0;

  Waveform operator()(const MultiChannelWaveform& mix) const;
};

// For every grid direction: render the probe, run the system, return
// sum(y^2)/sum(z^2) against the reference tone z, edge samples excluded from
// both sums. Parallel over directions (num_threads = 0 picks the hardware
// count); results are in grid order regardless of thread count.
Beampattern beampattern_sweep(const SpatialSystem& system, const ArrayGeometry& geom,
                              const DirectionGrid& grid, double freq_hz, double duration_s,
                              int sample_rate, int exclude_edge_samples, int num_threads = 0);

// CSV columns: k, azimuth_deg, elevation_deg, b_linear, b_db (dB capped at
// +-300).
void write_beampattern_csv(const std::string& path, const DirectionGrid& grid,
                           const Beampattern& bp);

// JSON export: version, metadata (frequency, grid size, system description,
// caller-supplied extras), directions and the linear response, as a string so
// this header stays JSON-library-free.
std::string beampattern_to_json(const DirectionGrid& grid, const Beampattern& bp,
                                const std::string& system_description,
                                const std::string& extra_metadata_json = "{}");

}  // namespace mcmask

#endif  // MCMASK_BEAMFORMING_HPP
