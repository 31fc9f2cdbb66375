// tests/test_trainer.cpp

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
#include <string>

#include "mcmask/mixsim.hpp"
#include "mcmask/trainer.hpp"

using namespace mcmask;

namespace {

Waveform unit_energy_wave(int length, Rng& rng, int rate = 8000) {
  Waveform w;
  w.sample_rate = rate;
  w.samples.resize(static_cast<size_t>(length));
  double power = 0.0;
  for (double& v : w.samples) {
    v = rng.uniform(-1.0, 1.0);
    power += v * v;
  }
  const double g = 1.0 / std::sqrt(power);
  for (double& v : w.samples) v *= g;
  return w;
}

SeparationModel toy_model(Rng& rng, int channels, int features, int frame, int hop) {
  SeparationModel model;
  model.frame_length = frame;
  model.hop = hop;
  model.reference_channel = 0;
  model.encoder = init_random(rng, channels, features, frame);
  model.estimator =
      MaskEstimator::init_random(rng, channels, channels, features, {features}, true, 0.1);
  Tensor v({frame, features});
  const double bound = 1.0 / std::sqrt(static_cast<double>(features));
  for (int i = 0; i < v.size(); ++i) v(i) = rng.uniform(-bound, bound);
  model.decoder.matrix = std::move(v);
  return model;
}

// Tiny directional dataset: harmonic source fixed ahead, white noise source
// from the side.
std::vector<TrainExample> toy_scenes(int count, const ArrayGeometry& geom, std::uint64_t seed) {
  std::vector<TrainExample> out;
  const Direction speech_dir = direction_from_azel_deg(20.0, 0.0);
  const Direction noise_dir = direction_from_azel_deg(200.0, 10.0);
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(i));
    Waveform src = synth_tone_complex(0.5, 8000, rng);
    MultiChannelWaveform noise = synth_noise_field(NoiseFieldKind::kDirectionalWhite,
                                                   geom.num_channels(), 0.75, 8000, rng, &geom,
                                                   &noise_dir);
    Scene scene = make_scene(src, noise, geom, speech_dir, 5.0, 0, rng);
    TrainExample ex;
    ex.mixture = scene.mixture;
    ex.target = scene.clean.channels[0];
    out.push_back(std::move(ex));
  }
  return out;
}

ArrayGeometry two_mic_geom() {
  ArrayGeometry geom;
  geom.positions = {{-0.05, 0.0, 0.0}, {0.05, 0.0, 0.0}};
  return geom;
}

}  // namespace

TEST_CASE("neg_sdr at the delta floor for a unit-energy reference") {
  Rng rng(50);
  Waveform ref = unit_energy_wave(512, rng);
  CHECK(neg_sdr(ref, ref) == doctest::Approx(-90.0).epsilon(1e-6));
}

TEST_CASE("neg_sdr of silence is near zero") {
  Rng rng(51);
  Waveform ref = unit_energy_wave(512, rng);
  Waveform zero = ref;
  for (double& v : zero.samples) v = 0.0;
  CHECK(neg_sdr(zero, ref) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("neg_sdr analytic ten-percent error case") {
  Rng rng(52);
  Waveform ref = unit_energy_wave(1024, rng);
  Waveform est = ref;
  // est = ref + e with e = sqrt(0.1) * ref: error energy is exactly a tenth
  // of the reference energy
  const double s = std::sqrt(0.1);
  for (size_t i = 0; i < est.samples.size(); ++i) est.samples[i] = ref.samples[i] * (1.0 + s);
  CHECK(neg_sdr(est, ref) == doctest::Approx(-10.0).epsilon(1e-6));
}

TEST_CASE("zero learning rate leaves parameters bitwise unchanged") {
  Rng rng(53);
  SeparationModel model = toy_model(rng, 2, 16, 16, 8);
  ArrayGeometry geom = two_mic_geom();
  auto data = toy_scenes(6, geom, 7);
  std::vector<TrainExample> train_set(data.begin(), data.begin() + 4);
  std::vector<TrainExample> val_set(data.begin() + 4, data.end());

  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.epochs = 1;
  cfg.batch_size = 2;
  cfg.segment_seconds = 0.25;
  cfg.seed = 11;

  auto before = model.parameters();
  std::vector<Tensor> saved;
  for (const Tensor* p : before) saved.push_back(*p);

  Checkpoint ckpt = train(model, train_set, val_set, cfg);
  auto after = ckpt.model.parameters();
  for (size_t p = 0; p < saved.size(); ++p)
    for (int i = 0; i < saved[p].size(); ++i) CHECK((*after[p])(i) == saved[p](i));
}

TEST_CASE("identical seeds give identical loss trajectories") {
  Rng rng(54);
  SeparationModel model = toy_model(rng, 2, 12, 16, 8);
  ArrayGeometry geom = two_mic_geom();
  auto data = toy_scenes(8, geom, 13);
  std::vector<TrainExample> train_set(data.begin(), data.begin() + 6);
  std::vector<TrainExample> val_set(data.begin() + 6, data.end());

  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 3;
  cfg.segment_seconds = 0.3;
  cfg.seed = 21;

  std::vector<EpochRecord> h1, h2;
  Checkpoint c1 = train(model, train_set, val_set, cfg, &h1);
  Checkpoint c2 = train(model, train_set, val_set, cfg, &h2);
  REQUIRE(h1.size() == h2.size());
  for (size_t i = 0; i < h1.size(); ++i) {
    CHECK(h1[i].train_loss == h2[i].train_loss);
    CHECK(h1[i].validation_loss == h2[i].validation_loss);
  }
  auto p1 = c1.model.parameters();
  auto p2 = c2.model.parameters();
  for (size_t p = 0; p < p1.size(); ++p)
    for (int i = 0; i < p1[p]->size(); ++i) CHECK((*p1[p])(i) == (*p2[p])(i));
}

TEST_CASE("checkpoint selection is the minimum of the validation trace") {
  Rng rng(55);
  SeparationModel model = toy_model(rng, 2, 12, 16, 8);
  ArrayGeometry geom = two_mic_geom();
  auto data = toy_scenes(8, geom, 17);
  std::vector<TrainExample> train_set(data.begin(), data.begin() + 6);
  std::vector<TrainExample> val_set(data.begin() + 6, data.end());

  TrainConfig cfg;
  cfg.epochs = 4;
  cfg.batch_size = 3;
  cfg.segment_seconds = 0.3;
  cfg.seed = 23;

  std::vector<EpochRecord> history;
  Checkpoint ckpt = train(model, train_set, val_set, cfg, &history);
  for (const EpochRecord& r : history) CHECK(ckpt.validation_loss <= r.validation_loss);
  CHECK(ckpt.validation_loss == history[static_cast<size_t>(ckpt.epoch)].validation_loss);
}

TEST_CASE("training reduces the validation loss on a toy directional scene set") {
  Rng rng(56);
  SeparationModel model = toy_model(rng, 2, 16, 16, 8);
  ArrayGeometry geom = two_mic_geom();
  auto data = toy_scenes(14, geom, 29);
  std::vector<TrainExample> train_set(data.begin(), data.begin() + 10);
  std::vector<TrainExample> val_set(data.begin() + 10, data.end());

  TrainConfig cfg;
  cfg.epochs = 8;
  cfg.batch_size = 4;
  cfg.segment_seconds = 0.5;
  cfg.seed = 31;

  std::vector<EpochRecord> history;
  Checkpoint ckpt = train(model, train_set, val_set, cfg, &history);
  CHECK(ckpt.validation_loss < history.front().validation_loss - 0.5);
}

TEST_CASE("an absurd learning rate aborts with epoch context") {
  Rng rng(57);
  SeparationModel model = toy_model(rng, 2, 12, 16, 8);
  ArrayGeometry geom = two_mic_geom();
  auto data = toy_scenes(6, geom, 37);
  std::vector<TrainExample> train_set(data.begin(), data.begin() + 4);
  std::vector<TrainExample> val_set(data.begin() + 4, data.end());

  TrainConfig cfg;
  cfg.learning_rate = 1e200;
  cfg.epochs = 2;
  cfg.batch_size = 2;
  cfg.segment_seconds = 0.3;
  cfg.seed = 41;

  try {
    train(model, train_set, val_set, cfg);
    FAIL("expected divergence");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("epoch") != std::string::npos);
  }
}

TEST_CASE("train rejects empty sets") {
  Rng rng(58);
  SeparationModel model = toy_model(rng, 2, 12, 16, 8);
  TrainConfig cfg;
  CHECK_THROWS_AS(train(model, {}, {}, cfg), ConfigError);
}
