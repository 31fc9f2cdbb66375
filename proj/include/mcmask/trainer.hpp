// include/mcmask/trainer.hpp

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

#ifndef MCMASK_TRAINER_HPP
#define MCMASK_TRAINER_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mcmask/masking.hpp"

namespace mcmask {

struct TrainConfig {
  double learning_rate = 3e-3;
  int epochs = 50;
  int batch_size = 8;
  double segment_seconds = 3.0;
  // Adam moment decays and epsilon, standard defaults.
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double loss_delta = 1e-9;  // negative-SDR stabilizer
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainExample {
  MultiChannelWaveform mixture;
  Waveform target;  // clean signal at the reference channel
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double validation_loss = 0.0;
};

struct Checkpoint {
  SeparationModel model;
  int epoch = 0;
  double validation_loss = 0.0;
};

// -10*log10(sum(ref^2) / (sum((ref-est)^2) + delta)); the plain counterpart of
// the graph's loss op, used for validation and tests.
double neg_sdr(const Waveform& est, const Waveform& ref, double delta = 1e-9);

// Mini-batch Adam on the full pipeline tape. Utterances are cropped (seeded
// random start) or zero-padded to segment_seconds for training; validation
// runs on full utterances. Returns the checkpoint with the smallest
// validation loss over epochs 0 (initialization) .. epochs.
// Throws NumericError with epoch/batch context if the loss diverges.
Checkpoint train(const SeparationModel& model, const std::vector<TrainExample>& train_set,
                 const std::vector<TrainExample>& val_set, const TrainConfig& cfg,
                 std::vector<EpochRecord>* history = nullptr, std::ostream* log = nullptr);

}  // namespace mcmask

#endif  // MCMASK_TRAINER_HPP
