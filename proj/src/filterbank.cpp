// src/filterbank.cpp

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

#include "mcmask/filterbank.hpp"

#include <cmath>

namespace mcmask {

const Tensor& EncoderBank::filter_for_channel(int channel) const {
  if (filters.empty()) throw ShapeError("encoder bank has no filters");
  if (shared) return filters.front();
  if (channel < 0 || channel >= static_cast<int>(filters.size()))
    throw ShapeError("encoder bank: channel index out of range");
  return filters[static_cast<size_t>(channel)];
}

void MultiChannelRepresentation::validate() const {
  if (channels.empty()) throw ShapeError("multi-channel representation has no channels");
  const auto& first = channels.front();
  for (const auto& rep : channels) {
    if (!rep.values.same_shape(first.values)) throw ShapeError("representation shapes disagree");
    if (rep.hop != first.hop || rep.original_length != first.original_length)
      throw ShapeError("representation framing metadata disagrees");
  }
}

FilterbankRepresentation encode(const FrameMatrix& frames, const EncoderBank& bank, int channel) {
  const Tensor& filt = bank.filter_for_channel(channel);
  if (filt.cols() != frames.frame_length())
    throw ShapeError("encode: bank frame length " + filt.shape_str() + " does not match frames");
  FilterbankRepresentation rep;
  rep.values = matmul(filt, frames.frames);
  rep.hop = frames.hop;
  rep.original_length = frames.original_length;
  rep.sample_rate = frames.sample_rate;
  return rep;
}

Waveform decode(const FilterbankRepresentation& rep, const DecoderBank& dec) {
  if (dec.num_features() != rep.num_features())
    throw ShapeError("decode: decoder expects " + dec.matrix.shape_str() + " features");
  FrameMatrix frames;
  frames.frames = matmul(dec.matrix, rep.values);
  frames.hop = rep.hop;
  frames.original_length = rep.original_length;
  frames.sample_rate = rep.sample_rate;
  return overlap_add(frames);
}

EncoderBank init_random(Rng& rng, int num_channels, int num_features, int frame_length, bool shared) {
  if (num_features < 1 || frame_length < 1)
    throw ShapeError("init_random: num_features and frame_length must be >= 1");
  if (num_channels < 1) throw ShapeError("init_random: num_channels must be >= 1");
  EncoderBank bank;
  bank.shared = shared;
  const double bound = 1.0 / std::sqrt(static_cast<double>(frame_length));
  const int count = shared ? 1 : num_channels;
  for (int c = 0; c < count; ++c) {
    Tensor filt({num_features, frame_length});
    for (int i = 0; i < filt.size(); ++i) filt(i) = rng.uniform(-bound, bound);
    bank.filters.push_back(std::move(filt));
  }
  return bank;
}

EncoderBank init_dft(int frame_length) {
  if (frame_length < 2 || frame_length % 2 != 0)
    throw ShapeError("init_dft: frame length must be even and >= 2");
  const int T = frame_length;
  Tensor filt({T, T});
  const double w = 2.0 * 3.14159265358979323846 / T;
  int row = 0;
  for (int k = 0; k <= T / 2; ++k, ++row)
    for (int t = 0; t < T; ++t) filt(row, t) = std::cos(w * k * t);
  for (int k = 1; k <= T / 2 - 1; ++k, ++row)
    for (int t = 0; t < T; ++t) filt(row, t) = std::sin(w * k * t);
  EncoderBank bank;
  bank.shared = true;
  bank.filters.push_back(std::move(filt));
  return bank;
}

Tensor solve_spd(const Tensor& gram, const Tensor& rhs, double* condition_estimate) {
  const int n = gram.rows();
  if (gram.cols() != n) throw ShapeError("solve_spd: gram matrix must be square");
  if (rhs.rows() != n) throw ShapeError("solve_spd: rhs row count mismatch");

  // Cholesky G = L L^T.
  Tensor lower({n, n});
  double pivot_max = 0.0, pivot_min = 0.0;
  for (int j = 0; j < n; ++j) {
    double diag = gram(j, j);
    for (int k = 0; k < j; ++k) diag -= lower(j, k) * lower(j, k);
    if (!(diag > 0.0)) throw NumericError("solve_spd: matrix is not positive definite");
    const double ljj = std::sqrt(diag);
    lower(j, j) = ljj;
    pivot_max = j == 0 ? ljj : std::max(pivot_max, ljj);
    pivot_min = j == 0 ? ljj : std::min(pivot_min, ljj);
    for (int i = j + 1; i < n; ++i) {
      double acc = gram(i, j);
      for (int k = 0; k < j; ++k) acc -= lower(i, k) * lower(j, k);
      lower(i, j) = acc / ljj;
    }
  }
  if (condition_estimate) {
    const double ratio = pivot_max / pivot_min;
    *condition_estimate = ratio * ratio;
  }

  // Forward then backward substitution, column by column of the rhs.
  const int m = rhs.cols();
  Tensor x({n, m});
  std::vector<double> y(static_cast<size_t>(n));
  for (int col = 0; col < m; ++col) {
    for (int i = 0; i < n; ++i) {
      double acc = rhs(i, col);
      for (int k = 0; k < i; ++k) acc -= lower(i, k) * y[static_cast<size_t>(k)];
      y[static_cast<size_t>(i)] = acc / lower(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
      double acc = y[static_cast<size_t>(i)];
      for (int k = i + 1; k < n; ++k) acc -= lower(k, i) * x(k, col);
      x(i, col) = acc / lower(i, i);
    }
  }
  require_finite(x, "solve_spd");
  return x;
}

DecoderBank pseudo_inverse_decoder(const EncoderBank& bank) {
  if (!bank.shared) throw ShapeError("pseudo_inverse_decoder: bank must be shared");
  const Tensor& u = bank.filters.front();
  const int f = u.rows();
  const int t = u.cols();
  constexpr double kMaxCondition = 1e12;

  double cond = 0.0;
  DecoderBank dec;
  try {
    if (f <= t) {
      // right inverse: U^T (U U^T)^-1, via G Z = U with symmetric G
      Tensor gram = matmul(u, transpose(u));
      dec.matrix = transpose(solve_spd(gram, u, &cond));
    } else {
      Tensor ut = transpose(u);
      Tensor gram = matmul(ut, u);
      dec.matrix = solve_spd(gram, ut, &cond);
    }
  } catch (const NumericError&) {
    throw NumericError("pseudo_inverse_decoder: bank is rank-deficient");
  }
  // cond estimates cond(G) = cond(U)^2; compare in the U domain.
  if (std::sqrt(cond) > kMaxCondition)
    throw NumericError("pseudo_inverse_decoder: bank condition estimate exceeds 1e12");
  return dec;
}

}  // namespace mcmask
