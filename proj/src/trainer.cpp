// src/trainer.cpp

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

#include "mcmask/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "mcmask/rng.hpp"

namespace mcmask {

void TrainConfig::validate() const {
  if (learning_rate < 0.0) throw ConfigError("train: learning_rate must be >= 0");
  if (epochs < 0) throw ConfigError("train: epochs must be >= 0");
  if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
  if (segment_seconds <= 0.0) throw ConfigError("train: segment_seconds must be > 0");
  if (loss_delta <= 0.0) throw ConfigError("train: loss_delta must be > 0");
}

double neg_sdr(const Waveform& est, const Waveform& ref, double delta) {
  if (est.length() != ref.length()) throw ShapeError("neg_sdr: length mismatch");
  const double ref_power = sum_squares(ref.samples);
  if (ref_power == 0.0) throw NumericError("neg_sdr: reference signal is all-zero");
  double err_power = 0.0;
  for (size_t i = 0; i < ref.samples.size(); ++i) {
    const double d = ref.samples[i] - est.samples[i];
    err_power += d * d;
  }
  return -10.0 * std::log10(ref_power / (err_power + delta));
}

namespace {

// Crop (seeded random start) or zero-pad every channel and the target to
// exactly `length` samples.
TrainExample fit_to_length(const TrainExample& ex, int length, Rng& rng) {
  const int have = ex.mixture.length();
  int start = 0;
  if (have > length) start = static_cast<int>(rng.uniform_int(0, have - length));
  TrainExample out;
  auto take = [&](const Waveform& w) {
    Waveform r;
    r.sample_rate = w.sample_rate;
    r.samples.assign(static_cast<size_t>(length), 0.0);
    const int n = std::min(length, w.length() - start);
    for (int i = 0; i < n; ++i) r.samples[static_cast<size_t>(i)] = w.samples[static_cast<size_t>(start + i)];
    return r;
  };
  for (const Waveform& ch : ex.mixture.channels) out.mixture.channels.push_back(take(ch));
  out.target = take(ex.target);
  return out;
}

double validation_loss(const SeparationModel& model, const std::vector<TrainExample>& val_set,
                       double delta) {
  double total = 0.0;
  for (const TrainExample& ex : val_set) {
    Waveform est = separate(model, ex.mixture);
    total += neg_sdr(est, ex.target, delta);
  }
  return total / static_cast<double>(val_set.size());
}

}  // namespace

Checkpoint train(const SeparationModel& model_in, const std::vector<TrainExample>& train_set,
                 const std::vector<TrainExample>& val_set, const TrainConfig& cfg,
                 std::vector<EpochRecord>* history, std::ostream* log) {
  cfg.validate();
  if (train_set.empty() || val_set.empty()) throw ConfigError("train: empty train or validation set");
  SeparationModel model = model_in;
  model.validate();
  for (const TrainExample& ex : train_set) {
    ex.mixture.validate();
    if (ex.mixture.num_channels() != model.num_channels())
      throw ShapeError("train: example channel count does not match model");
    if (ex.target.length() != ex.mixture.length())
      throw ShapeError("train: target length does not match mixture");
  }

  const int sample_rate = train_set.front().mixture.sample_rate();
  const int seg_length = std::max(1, static_cast<int>(std::lround(cfg.segment_seconds * sample_rate)));

  PipelineGraph pg = build_pipeline_graph(model, seg_length, cfg.loss_delta);
  auto params = model.parameters();

  // Adam state.
  std::vector<Tensor> m1, m2;
  for (const Tensor* p : params) {
    m1.emplace_back(p->shape());
    m2.emplace_back(p->shape());
  }
  std::vector<Tensor> grad_acc;
  for (const Tensor* p : params) grad_acc.emplace_back(p->shape());

  Rng rng(cfg.seed);

  Checkpoint best;
  best.model = model;
  best.epoch = 0;
  best.validation_loss = validation_loss(model, val_set, cfg.loss_delta);
  if (history) history->push_back({0, 0.0, best.validation_loss});
  if (log)
    (*log) << "{\"epoch\":0,\"train_loss\":null,\"val_loss\":" << best.validation_loss << "}\n";

  std::vector<size_t> order(train_set.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::int64_t step = 0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    // Fisher-Yates shuffle with the deterministic stream.
    for (size_t i = order.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(order[i - 1], order[j]);
    }

    double epoch_loss = 0.0;
    int items_seen = 0;
    const size_t total = order.size();
    for (size_t begin = 0; begin < total; begin += static_cast<size_t>(cfg.batch_size)) {
      const size_t end = std::min(total, begin + static_cast<size_t>(cfg.batch_size));
      const int batch_items = static_cast<int>(end - begin);
      for (Tensor& gacc : grad_acc) std::fill(gacc.data().begin(), gacc.data().end(), 0.0);

      double batch_loss = 0.0;
      for (size_t idx = begin; idx < end; ++idx) {
        TrainExample ex = fit_to_length(train_set[order[idx]], seg_length, rng);
        try {
          load_example(pg, ex.mixture, ex.target);
          batch_loss += pg.graph.value(pg.loss_node)(0);
          auto grads = pg.graph.backward(pg.loss_node);
          for (size_t p = 0; p < params.size(); ++p) {
            const Tensor& gp = grads[static_cast<size_t>(pg.param_nodes[p])];
            auto acc = grad_acc[p].data();
            auto src = gp.data();
            for (int i = 0; i < grad_acc[p].size(); ++i) acc[i] += src[i];
          }
        } catch (const NumericError& e) {
          throw NumericError("train: diverged at epoch " + std::to_string(epoch) + ", batch " +
                             std::to_string(begin / static_cast<size_t>(cfg.batch_size)) + ": " +
                             e.what());
        }
      }
      if (!std::isfinite(batch_loss))
        throw NumericError("train: diverged at epoch " + std::to_string(epoch) +
                           " (non-finite batch loss)");
      epoch_loss += batch_loss;
      items_seen += batch_items;

      // Adam step on the batch-mean gradient.
      ++step;
      const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      const double inv_batch = 1.0 / static_cast<double>(batch_items);
      for (size_t p = 0; p < params.size(); ++p) {
        auto pm = m1[p].data();
        auto pv = m2[p].data();
        auto pg_ = grad_acc[p].data();
        auto pw = params[p]->data();
        for (int i = 0; i < params[p]->size(); ++i) {
          const double grad = pg_[i] * inv_batch;
          pm[i] = cfg.beta1 * pm[i] + (1.0 - cfg.beta1) * grad;
          pv[i] = cfg.beta2 * pv[i] + (1.0 - cfg.beta2) * grad * grad;
          const double mhat = pm[i] / bc1;
          const double vhat = pv[i] / bc2;
          pw[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_epsilon);
        }
      }
      load_parameters(pg, model);
    }

    const double train_loss = epoch_loss / static_cast<double>(items_seen);
    const double val_loss = validation_loss(model, val_set, cfg.loss_delta);
    if (!std::isfinite(val_loss))
      throw NumericError("train: diverged at epoch " + std::to_string(epoch) +
                         " (non-finite validation loss)");
    if (history) history->push_back({epoch, train_loss, val_loss});
    if (log)
      (*log) << "{\"epoch\":" << epoch << ",\"train_loss\":" << train_loss
             << ",\"val_loss\":" << val_loss << "}\n";
    if (val_loss < best.validation_loss) {
      best.model = model;
      best.epoch = epoch;
      best.validation_loss = val_loss;
    }
  }
  return best;
}

}  // namespace mcmask
