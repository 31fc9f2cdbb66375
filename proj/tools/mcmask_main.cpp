// tools/mcmask_main.cpp

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

// Command-line front end: simulate | train | separate | beampattern | metrics.
// Scalar options may come from a JSON config file (--config); explicit flags
// win. Exit codes: 0 success, 2 config error, 3 data error, 4 numerical
// failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcmask/beamforming.hpp"
#include "mcmask/masking.hpp"
#include "mcmask/metrics.hpp"
#include "mcmask/mixsim.hpp"
#include "mcmask/model_io.hpp"
#include "mcmask/scene_io.hpp"
#include "mcmask/trainer.hpp"
#include "mcmask/wav.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mcmask;

namespace {

// JSON experiment configs: a top-level object whose keys are long option
// names without the dashes. The file's values are appended as synthetic
// arguments for options not already present, so explicit flags win.
std::vector<std::string> merge_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;

  json cfg = load_json_file(config_path);
  if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object: " + config_path);
  auto given = [&args](const std::string& flag) {
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
      continue;
    }
    args.push_back(flag);
    args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  return args;
}

struct SimulateArgs {
  std::string out_dir, geometry_path;
  int num_scenes = 10;
  std::uint64_t seed = 0;
  double snr_db = 5.0;
  double duration_s = 1.0;
  int sample_rate = 16000;
  int reference_channel = 0;
  std::string source_kind = "tone";           // tone | white | pink
  std::string noise_kind = "diffuse-white";   // diffuse-white | diffuse-pink |
                                              // directional-white | directional-pink
  std::string doa_mode = "random";            // random | fixed
  double azimuth_deg = 0.0, elevation_deg = 0.0;
  double noise_azimuth_deg = 180.0, noise_elevation_deg = 0.0;
};

Waveform make_source(const std::string& kind, double duration_s, int sample_rate, Rng& rng) {
  if (kind == "tone") return synth_tone_complex(duration_s, sample_rate, rng);
  if (kind == "white") return synth_white(duration_s, sample_rate, rng);
  if (kind == "pink") return synth_pink(duration_s, sample_rate, rng);
  throw ConfigError("unknown source kind: " + kind);
}

int run_simulate(const SimulateArgs& args) {
  if (args.geometry_path.empty()) throw ConfigError("simulate: --geometry is required");
  if (args.out_dir.empty()) throw ConfigError("simulate: --out is required");
  if (!std::isfinite(args.snr_db)) throw ConfigError("simulate: snr-db must be finite");
  if (args.num_scenes < 1) throw ConfigError("simulate: num-scenes must be >= 1");
  ArrayGeometry geom = load_geometry(args.geometry_path);
  if (args.reference_channel < 0 || args.reference_channel >= geom.num_channels())
    throw ConfigError("simulate: reference-channel out of range for geometry");

  fs::create_directories(args.out_dir);

  const bool directional_noise = args.noise_kind.rfind("directional", 0) == 0;
  NoiseFieldKind noise_kind;
  if (args.noise_kind == "diffuse-white") noise_kind = NoiseFieldKind::kDiffuseWhite;
  else if (args.noise_kind == "diffuse-pink") noise_kind = NoiseFieldKind::kDiffusePink;
  else if (args.noise_kind == "directional-white") noise_kind = NoiseFieldKind::kDirectionalWhite;
  else if (args.noise_kind == "directional-pink") noise_kind = NoiseFieldKind::kDirectionalPink;
  else throw ConfigError("unknown noise kind: " + args.noise_kind);
  if (args.doa_mode != "random" && args.doa_mode != "fixed")
    throw ConfigError("unknown doa mode: " + args.doa_mode);

  SceneManifest manifest;
  manifest.sample_rate = args.sample_rate;
  manifest.master_seed = args.seed;
  manifest.config_echo = {{"num-scenes", args.num_scenes},
                          {"seed", args.seed},
                          {"snr-db", args.snr_db},
                          {"duration", args.duration_s},
                          {"sample-rate", args.sample_rate},
                          {"reference-channel", args.reference_channel},
                          {"source-kind", args.source_kind},
                          {"noise-kind", args.noise_kind},
                          {"doa-mode", args.doa_mode},
                          {"geometry", geometry_to_json(geom)}};

  const Direction noise_dir =
      direction_from_azel_deg(args.noise_azimuth_deg, args.noise_elevation_deg);
  for (int i = 0; i < args.num_scenes; ++i) {
    Rng rng = Rng::derive(args.seed, static_cast<std::uint64_t>(i));
    Direction dir;
    if (args.doa_mode == "fixed") {
      dir = direction_from_azel_deg(args.azimuth_deg, args.elevation_deg);
    } else {
      // uniform over the sphere
      const double z = rng.uniform(-1.0, 1.0);
      const double phi = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      dir = {r * std::cos(phi), r * std::sin(phi), z};
    }
    Waveform src = make_source(args.source_kind, args.duration_s, args.sample_rate, rng);
    // longer noise so the crop start varies
    MultiChannelWaveform noise =
        synth_noise_field(noise_kind, geom.num_channels(), 1.5 * args.duration_s, args.sample_rate,
                          rng, directional_noise ? &geom : nullptr,
                          directional_noise ? &noise_dir : nullptr);
    Scene scene = make_scene(src, noise, geom, dir, args.snr_db, args.reference_channel, rng);

    char id[32];
    std::snprintf(id, sizeof id, "scene_%04d", i);
    manifest.scenes.push_back(save_scene(args.out_dir, id, scene, static_cast<std::uint64_t>(i)));
  }
  save_manifest(args.out_dir, manifest);
  std::cout << "wrote " << manifest.scenes.size() << " scenes to " << args.out_dir << "\n";
  return 0;
}

struct TrainArgs {
  std::string dataset_dir, out_path, log_path;
  double val_fraction = 0.2;
  int frame_length = 64;
  int hop = 0;  // 0 = frame_length / 2
  int num_features = 64;
  int hidden = -1;  // -1 = num_features, 0 = single linear layer
  std::string mask_mode = "multi";     // multi | single
  std::string encoder_init = "random"; // random | dft
  std::string decoder_init = "random"; // random | pinv
  bool no_bias = false;
  double output_gain = 0.1;
  int epochs = 50;
  double learning_rate = 3e-3;
  int batch_size = 8;
  double segment_seconds = 3.0;
  std::uint64_t seed = 0;
};

SeparationModel build_model(const TrainArgs& args, int num_channels, int reference_channel) {
  SeparationModel model;
  model.frame_length = args.frame_length;
  model.hop = args.hop > 0 ? args.hop : args.frame_length / 2;  // half-window hop rule
  model.reference_channel = reference_channel;

  Rng rng(args.seed ^ 0xA5A5A5A5ULL);
  int num_features = args.num_features;
  if (args.encoder_init == "dft") {
    model.encoder = init_dft(args.frame_length);
    num_features = args.frame_length;
  } else if (args.encoder_init == "random") {
    model.encoder = init_random(rng, num_channels, num_features, args.frame_length);
  } else {
    throw ConfigError("unknown encoder init: " + args.encoder_init);
  }

  if (args.decoder_init == "pinv") {
    if (!model.encoder.shared)
      throw ConfigError("decoder-init pinv needs a shared encoder (encoder-init dft)");
    model.decoder = pseudo_inverse_decoder(model.encoder);
  } else if (args.decoder_init == "random") {
    Tensor v({args.frame_length, num_features});
    const double bound = 1.0 / std::sqrt(static_cast<double>(num_features));
    for (int i = 0; i < v.size(); ++i) v(i) = rng.uniform(-bound, bound);
    model.decoder.matrix = std::move(v);
  } else {
    throw ConfigError("unknown decoder init: " + args.decoder_init);
  }

  const int out_channels = args.mask_mode == "single" ? 1 : num_channels;
  if (args.mask_mode != "single" && args.mask_mode != "multi")
    throw ConfigError("unknown mask mode: " + args.mask_mode);
  std::vector<int> hidden;
  const int h = args.hidden < 0 ? num_features : args.hidden;
  if (h > 0) hidden.push_back(h);
  model.estimator = MaskEstimator::init_random(rng, num_channels, out_channels, num_features,
                                               hidden, !args.no_bias, args.output_gain);
  model.validate();
  return model;
}

int run_train(const TrainArgs& args) {
  if (args.dataset_dir.empty()) throw ConfigError("train: --dataset is required");
  if (args.out_path.empty()) throw ConfigError("train: --out is required");
  if (args.val_fraction <= 0.0 || args.val_fraction >= 1.0)
    throw ConfigError("train: val-fraction must be in (0, 1)");

  SceneManifest manifest = load_manifest((fs::path(args.dataset_dir) / "manifest.json").string());
  std::vector<TrainExample> all = load_examples(args.dataset_dir, manifest);
  if (all.size() < 2) throw DataError("train: dataset needs at least two scenes");
  const size_t val_count =
      std::max<size_t>(1, static_cast<size_t>(args.val_fraction * static_cast<double>(all.size())));
  std::vector<TrainExample> train_set(all.begin(), all.end() - static_cast<std::ptrdiff_t>(val_count));
  std::vector<TrainExample> val_set(all.end() - static_cast<std::ptrdiff_t>(val_count), all.end());

  const int channels = train_set.front().mixture.num_channels();
  const int reference = manifest.scenes.front().reference_channel;
  SeparationModel model = build_model(args, channels, reference);

  TrainConfig cfg;
  cfg.learning_rate = args.learning_rate;
  cfg.epochs = args.epochs;
  cfg.batch_size = args.batch_size;
  cfg.segment_seconds = args.segment_seconds;
  cfg.seed = args.seed;

  std::ofstream log;
  if (!args.log_path.empty()) {
    log.open(args.log_path);
    if (!log) throw DataError("cannot open log for writing: " + args.log_path);
  }

  std::vector<EpochRecord> history;
  Checkpoint ckpt = train(model, train_set, val_set, cfg, &history, log.is_open() ? &log : nullptr);

  json echo = {{"dataset", args.dataset_dir},
               {"val-fraction", args.val_fraction},
               {"frame-length", args.frame_length},
               {"hop", model.hop},
               {"features", model.num_features()},
               {"hidden", args.hidden},
               {"mask-mode", args.mask_mode},
               {"encoder-init", args.encoder_init},
               {"decoder-init", args.decoder_init},
               {"bias", !args.no_bias},
               {"output-gain", args.output_gain},
               {"epochs", args.epochs},
               {"lr", args.learning_rate},
               {"batch-size", args.batch_size},
               {"segment-seconds", args.segment_seconds},
               {"seed", args.seed}};
  save_checkpoint(args.out_path, ckpt, echo);
  std::cout << "best epoch " << ckpt.epoch << ", validation loss " << ckpt.validation_loss
            << ", checkpoint written to " << args.out_path << "\n";
  return 0;
}

struct SeparateArgs {
  std::string checkpoint, in_wav, out_wav, oracle_clean;
};

int run_separate(const SeparateArgs& args) {
  if (args.checkpoint.empty() || args.in_wav.empty() || args.out_wav.empty())
    throw ConfigError("separate: --checkpoint, --in and --out are required");
  Checkpoint ckpt = load_checkpoint(args.checkpoint);
  MultiChannelWaveform mix = read_wav(args.in_wav);
  if (mix.num_channels() != ckpt.model.num_channels())
    throw DataError("separate: input has " + std::to_string(mix.num_channels()) +
                    " channels, model expects " + std::to_string(ckpt.model.num_channels()));
  Waveform out;
  if (!args.oracle_clean.empty()) {
    // oracle-mask hook: masks solved from a known clean reference
    MultiChannelWaveform clean = read_wav(args.oracle_clean);
    MultiChannelRepresentation reps = encode_mixture(ckpt.model, mix);
    FrameMatrix target_frames =
        segment(clean.channels[static_cast<size_t>(ckpt.model.reference_channel)],
                ckpt.model.frame_length, ckpt.model.hop);
    FilterbankRepresentation target =
        encode(target_frames, ckpt.model.encoder, ckpt.model.reference_channel);
    out = separate_with_masks(ckpt.model, mix, oracle_masks(reps, target));
  } else {
    out = separate(ckpt.model, mix);
  }
  write_wav(args.out_wav, out);
  return 0;
}

struct BeampatternArgs {
  std::string geometry_path, mode = "das", out_csv, out_json;
  std::string checkpoint, mix_wav, oracle_clean;
  double freq_hz = 1000.0;
  int grid_k = 5100;
  double duration_s = 0.5;
  int sample_rate = 16000;
  int exclude_edges = 256;
  int threads = 0;
  int channel = 0;
  double azimuth_deg = 0.0, elevation_deg = 0.0;
};

int run_beampattern(const BeampatternArgs& args) {
  if (args.geometry_path.empty()) throw ConfigError("beampattern: --geometry is required");
  if (args.out_csv.empty() && args.out_json.empty())
    throw ConfigError("beampattern: --out (csv) or --json is required");
  ArrayGeometry geom = load_geometry(args.geometry_path);
  geom.validate(2);
  if (!(args.freq_hz > 0.0) || args.freq_hz >= 0.5 * args.sample_rate)
    throw ConfigError("beampattern: freq must lie below Nyquist");

  DirectionGrid grid = make_grid(args.grid_k);
  SpatialSystem system;
  double duration_s = args.duration_s;
  json meta = {{"freq_hz", args.freq_hz},
               {"grid_k", args.grid_k},
               {"sample_rate", args.sample_rate},
               {"exclude_edges", args.exclude_edges},
               {"mode", args.mode},
               {"geometry", geometry_to_json(geom)}};

  if (args.mode == "das") {
    const Direction steer = direction_from_azel_deg(args.azimuth_deg, args.elevation_deg);
    system = make_das_system(geom, steer);
    meta["steer_azimuth_deg"] = args.azimuth_deg;
    meta["steer_elevation_deg"] = args.elevation_deg;
  } else if (args.mode == "passthrough") {
    system = make_channel_passthrough(args.channel);
    meta["channel"] = args.channel;
  } else if (args.mode == "mask") {
    if (args.checkpoint.empty() || args.mix_wav.empty())
      throw ConfigError("beampattern mask mode: --checkpoint and --mix are required");
    Checkpoint ckpt = load_checkpoint(args.checkpoint);
    MultiChannelWaveform mix = read_wav(args.mix_wav);
    if (mix.num_channels() != geom.num_channels())
      throw DataError("beampattern: mixture channels do not match geometry");
    MultiChannelRepresentation reps = encode_mixture(ckpt.model, mix);
    MaskSet masks;
    if (!args.oracle_clean.empty()) {
      MultiChannelWaveform clean = read_wav(args.oracle_clean);
      FrameMatrix target_frames =
          segment(clean.channels[static_cast<size_t>(ckpt.model.reference_channel)],
                  ckpt.model.frame_length, ckpt.model.hop);
      masks = oracle_masks(reps, encode(target_frames, ckpt.model.encoder,
                                        ckpt.model.reference_channel));
      meta["masks"] = "oracle";
    } else {
      masks = estimate_masks(ckpt.model.estimator, reps);
      if (ckpt.model.estimator.single_channel())
        throw ConfigError("beampattern mask mode needs a multi-channel mask model");
      meta["masks"] = "estimated";
    }
    MaskedFilterbankSystem masked{ckpt.model.encoder, ckpt.model.decoder, std::move(masks),
                                  ckpt.model.frame_length, ckpt.model.hop};
    system = masked;
    // probe must produce the frame count the frozen masks were computed for
    duration_s = static_cast<double>(mix.length()) / mix.sample_rate();
    meta["probe_from_mix"] = args.mix_wav;
  } else {
    throw ConfigError("unknown beampattern mode: " + args.mode);
  }
  meta["duration_s"] = duration_s;

  Beampattern bp = beampattern_sweep(system, geom, grid, args.freq_hz, duration_s,
                                     args.sample_rate, args.exclude_edges, args.threads);
  if (!args.out_csv.empty()) write_beampattern_csv(args.out_csv, grid, bp);
  if (!args.out_json.empty()) {
    const std::string text = beampattern_to_json(grid, bp, args.mode, meta.dump());
    std::ofstream out(args.out_json);
    if (!out) throw DataError("cannot open for writing: " + args.out_json);
    out << text << "\n";
    if (!out) throw DataError("write failed: " + args.out_json);
  }
  return 0;
}

struct MetricsArgs {
  std::string checkpoint, dataset_dir, out_path;
  bool oracle = false;
};

int run_metrics(const MetricsArgs& args) {
  if (args.checkpoint.empty() || args.dataset_dir.empty())
    throw ConfigError("metrics: --checkpoint and --dataset are required");
  Checkpoint ckpt = load_checkpoint(args.checkpoint);
  SceneManifest manifest = load_manifest((fs::path(args.dataset_dir) / "manifest.json").string());

  MetricReport report;
  for (const SceneEntry& entry : manifest.scenes) {
    MultiChannelWaveform mix = read_wav((fs::path(args.dataset_dir) / entry.mixture_file).string());
    MultiChannelWaveform clean = read_wav((fs::path(args.dataset_dir) / entry.clean_file).string());
    const Waveform& target = clean.channels[static_cast<size_t>(entry.reference_channel)];
    Waveform est;
    if (args.oracle) {
      MultiChannelRepresentation reps = encode_mixture(ckpt.model, mix);
      FrameMatrix target_frames = segment(target, ckpt.model.frame_length, ckpt.model.hop);
      FilterbankRepresentation target_rep =
          encode(target_frames, ckpt.model.encoder, ckpt.model.reference_channel);
      est = separate_with_masks(ckpt.model, mix, oracle_masks(reps, target_rep));
    } else {
      est = separate(ckpt.model, mix);
    }
    SceneMetrics m;
    m.id = entry.id;
    m.sdr_db = sdr_db(target, est);
    m.si_sdr_db = si_sdr_db(target, est);
    m.input_sdr_db = sdr_db(target, mix.channels[static_cast<size_t>(entry.reference_channel)]);
    report.scenes.push_back(std::move(m));
  }
  report.finalize();
  json j = json::parse(metric_report_to_json(report));
  j["checkpoint"] = args.checkpoint;
  j["dataset"] = args.dataset_dir;
  j["masks"] = args.oracle ? "oracle" : "estimated";
  const std::string text = j.dump(2);
  if (args.out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(args.out_path);
    if (!out) throw DataError("cannot open for writing: " + args.out_path);
    out << text << "\n";
  }
  std::cout << "mean SDR " << report.mean_sdr_db << " dB over " << report.scenes.size()
            << " scenes\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-channel masking source separation in a learnable filterbank domain"};
  app.require_subcommand(1);

  std::string config_path;  // consumed by merge_config_args before parsing

  SimulateArgs sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "generate a synthetic scene dataset");
  c_sim->add_option("--config", config_path, "JSON config file; explicit flags override");
  c_sim->add_option("--out", sim.out_dir, "output dataset directory");
  c_sim->add_option("--geometry", sim.geometry_path, "array geometry JSON");
  c_sim->add_option("--num-scenes", sim.num_scenes);
  c_sim->add_option("--seed", sim.seed);
  c_sim->add_option("--snr-db", sim.snr_db);
  c_sim->add_option("--duration", sim.duration_s, "utterance duration, seconds");
  c_sim->add_option("--sample-rate", sim.sample_rate);
  c_sim->add_option("--reference-channel", sim.reference_channel);
  c_sim->add_option("--source-kind", sim.source_kind, "tone | white | pink");
  c_sim->add_option("--noise-kind", sim.noise_kind,
                    "diffuse-white | diffuse-pink | directional-white | directional-pink");
  c_sim->add_option("--doa-mode", sim.doa_mode, "random | fixed");
  c_sim->add_option("--azimuth", sim.azimuth_deg, "source azimuth (fixed mode), degrees");
  c_sim->add_option("--elevation", sim.elevation_deg, "source elevation (fixed mode), degrees");
  c_sim->add_option("--noise-azimuth", sim.noise_azimuth_deg);
  c_sim->add_option("--noise-elevation", sim.noise_elevation_deg);

  TrainArgs tr;
  CLI::App* c_tr = app.add_subcommand("train", "train a separation model on a dataset");
  c_tr->add_option("--config", config_path, "JSON config file; explicit flags override");
  c_tr->add_option("--dataset", tr.dataset_dir, "dataset directory with manifest.json");
  c_tr->add_option("--out", tr.out_path, "checkpoint output path");
  c_tr->add_option("--log", tr.log_path, "line-delimited JSON training log");
  c_tr->add_option("--val-fraction", tr.val_fraction);
  c_tr->add_option("--frame-length", tr.frame_length);
  c_tr->add_option("--hop", tr.hop, "0 = half the frame length");
  c_tr->add_option("--features", tr.num_features);
  c_tr->add_option("--hidden", tr.hidden, "hidden width; -1 = features, 0 = single layer");
  c_tr->add_option("--mask-mode", tr.mask_mode, "multi | single");
  c_tr->add_option("--encoder-init", tr.encoder_init, "random | dft");
  c_tr->add_option("--decoder-init", tr.decoder_init, "random | pinv");
  c_tr->add_flag("--no-bias", tr.no_bias);
  c_tr->add_option("--output-gain", tr.output_gain, "final estimator layer init scale");
  c_tr->add_option("--epochs", tr.epochs);
  c_tr->add_option("--lr", tr.learning_rate);
  c_tr->add_option("--batch-size", tr.batch_size);
  c_tr->add_option("--segment-seconds", tr.segment_seconds);
  c_tr->add_option("--seed", tr.seed);

  SeparateArgs sep;
  CLI::App* c_sep = app.add_subcommand("separate", "run a checkpoint on a multi-channel WAV");
  c_sep->add_option("--checkpoint", sep.checkpoint);
  c_sep->add_option("--in", sep.in_wav);
  c_sep->add_option("--out", sep.out_wav);
  c_sep->add_option("--oracle-clean", sep.oracle_clean,
                    "clean multi-channel WAV; apply oracle masks instead of the estimator");

  BeampatternArgs bp;
  CLI::App* c_bp = app.add_subcommand("beampattern", "measure the spatial response of a system");
  c_bp->add_option("--config", config_path, "JSON config file; explicit flags override");
  c_bp->add_option("--geometry", bp.geometry_path);
  c_bp->add_option("--mode", bp.mode, "das | mask | passthrough");
  c_bp->add_option("--out", bp.out_csv, "CSV output path");
  c_bp->add_option("--json", bp.out_json, "JSON output path");
  c_bp->add_option("--checkpoint", bp.checkpoint, "mask mode: model checkpoint");
  c_bp->add_option("--mix", bp.mix_wav, "mask mode: mixture the masks are computed from");
  c_bp->add_option("--oracle-clean", bp.oracle_clean, "mask mode: clean WAV for oracle masks");
  c_bp->add_option("--freq", bp.freq_hz, "probe frequency, Hz");
  c_bp->add_option("--grid-k", bp.grid_k, "number of grid directions");
  c_bp->add_option("--duration", bp.duration_s, "probe duration, seconds (das/passthrough)");
  c_bp->add_option("--sample-rate", bp.sample_rate);
  c_bp->add_option("--exclude-edges", bp.exclude_edges, "samples dropped from each end");
  c_bp->add_option("--threads", bp.threads, "0 = hardware concurrency");
  c_bp->add_option("--channel", bp.channel, "passthrough mode channel");
  c_bp->add_option("--azimuth", bp.azimuth_deg, "das steering azimuth, degrees");
  c_bp->add_option("--elevation", bp.elevation_deg, "das steering elevation, degrees");

  MetricsArgs me;
  CLI::App* c_me = app.add_subcommand("metrics", "evaluate a checkpoint on a dataset");
  c_me->add_option("--checkpoint", me.checkpoint);
  c_me->add_option("--dataset", me.dataset_dir);
  c_me->add_option("--out", me.out_path, "report JSON path (default: stdout)");
  c_me->add_flag("--oracle", me.oracle, "apply oracle masks instead of the estimator");

  try {
    std::vector<std::string> args = merge_config_args(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11's vector overload wants reversed order
    app.parse(args);
    if (c_sim->parsed()) return run_simulate(sim);
    if (c_tr->parsed()) return run_train(tr);
    if (c_sep->parsed()) return run_separate(sep);
    if (c_bp->parsed()) return run_beampattern(bp);
    if (c_me->parsed()) return run_metrics(me);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ShapeError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  }
}
