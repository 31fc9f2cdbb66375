// include/mcmask/scene_io.hpp

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

#ifndef MCMASK_SCENE_IO_HPP
#define MCMASK_SCENE_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "mcmask/mixsim.hpp"
#include "mcmask/trainer.hpp"

namespace mcmask {

// Geometry file: {"speed_of_sound": 343.0, "positions": [[x,y,z], ...]}.
ArrayGeometry geometry_from_json(const nlohmann::json& j);
nlohmann::json geometry_to_json(const ArrayGeometry& geom);
ArrayGeometry load_geometry(const std::string& path);

// Scene datasets are directories of float32 WAVs plus manifest.json; each
// entry records DOA, SNR, reference channel and the per-scene seed.
struct SceneEntry {
  std::string id;
  std::string mixture_file;
  std::string clean_file;
  std::string noise_file;
  Direction doa{1.0, 0.0, 0.0};
  double snr_db = 0.0;
  int reference_channel = 0;
  std::uint64_t seed = 0;
};

struct SceneManifest {
  int sample_rate = 16000;
  std::uint64_t master_seed = 0;
  nlohmann::json config_echo;
  std::vector<SceneEntry> scenes;
};

// Writes the three WAVs of a scene into `dir` and returns the manifest entry.
SceneEntry save_scene(const std::string& dir, const std::string& id, const Scene& scene,
                      std::uint64_t seed);

void save_manifest(const std::string& dir, const SceneManifest& manifest);
SceneManifest load_manifest(const std::string& manifest_path);

// Loads mixtures and clean reference-channel targets for training/metrics.
std::vector<TrainExample> load_examples(const std::string& dataset_dir,
                                        const SceneManifest& manifest);

}  // namespace mcmask

#endif  // MCMASK_SCENE_IO_HPP
