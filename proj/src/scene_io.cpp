// src/scene_io.cpp

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

#include "mcmask/scene_io.hpp"

#include <filesystem>

#include "mcmask/model_io.hpp"
#include "mcmask/wav.hpp"

namespace mcmask {

namespace fs = std::filesystem;

ArrayGeometry geometry_from_json(const nlohmann::json& j) {
  ArrayGeometry geom;
  try {
    if (j.contains("speed_of_sound")) geom.speed_of_sound = j.at("speed_of_sound").get<double>();
    for (const auto& p : j.at("positions")) {
      if (!p.is_array() || p.size() != 3)
        throw ConfigError("geometry: each position must be [x, y, z]");
      geom.positions.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed geometry (field 'positions'): ") + e.what());
  }
  geom.validate();
  return geom;
}

nlohmann::json geometry_to_json(const ArrayGeometry& geom) {
  nlohmann::json j;
  j["speed_of_sound"] = geom.speed_of_sound;
  j["positions"] = nlohmann::json::array();
  for (const auto& p : geom.positions) j["positions"].push_back({p[0], p[1], p[2]});
  return j;
}

ArrayGeometry load_geometry(const std::string& path) {
  return geometry_from_json(load_json_file(path));
}

SceneEntry save_scene(const std::string& dir, const std::string& id, const Scene& scene,
                      std::uint64_t seed) {
  SceneEntry entry;
  entry.id = id;
  entry.mixture_file = id + "_mix.wav";
  entry.clean_file = id + "_clean.wav";
  entry.noise_file = id + "_noise.wav";
  entry.doa = scene.source_doa;
  entry.snr_db = scene.snr_db;
  entry.reference_channel = scene.reference_channel;
  entry.seed = seed;
  write_wav((fs::path(dir) / entry.mixture_file).string(), scene.mixture);
  write_wav((fs::path(dir) / entry.clean_file).string(), scene.clean);
  write_wav((fs::path(dir) / entry.noise_file).string(), scene.noise);
  return entry;
}

void save_manifest(const std::string& dir, const SceneManifest& manifest) {
  nlohmann::json j;
  j["version"] = 1;
  j["sample_rate"] = manifest.sample_rate;
  j["master_seed"] = manifest.master_seed;
  j["config"] = manifest.config_echo;
  j["scenes"] = nlohmann::json::array();
  for (const SceneEntry& s : manifest.scenes) {
    double az = 0.0, el = 0.0;
    azel_deg_from_direction(s.doa, &az, &el);
    j["scenes"].push_back({{"id", s.id},
                           {"mixture", s.mixture_file},
                           {"clean", s.clean_file},
                           {"noise", s.noise_file},
                           {"doa", {s.doa[0], s.doa[1], s.doa[2]}},
                           {"azimuth_deg", az},
                           {"elevation_deg", el},
                           {"snr_db", s.snr_db},
                           {"reference_channel", s.reference_channel},
                           {"seed", s.seed}});
  }
  save_json_file((fs::path(dir) / "manifest.json").string(), j);
}

SceneManifest load_manifest(const std::string& manifest_path) {
  nlohmann::json j = load_json_file(manifest_path);
  if (!j.contains("version") || j["version"].get<int>() != 1)
    throw DataError("manifest: missing or unsupported version");
  SceneManifest m;
  try {
    m.sample_rate = j.at("sample_rate").get<int>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("config")) m.config_echo = j["config"];
    for (const auto& s : j.at("scenes")) {
      SceneEntry e;
      e.id = s.at("id").get<std::string>();
      e.mixture_file = s.at("mixture").get<std::string>();
      e.clean_file = s.at("clean").get<std::string>();
      e.noise_file = s.at("noise").get<std::string>();
      const auto& doa = s.at("doa");
      e.doa = {doa[0].get<double>(), doa[1].get<double>(), doa[2].get<double>()};
      e.snr_db = s.at("snr_db").get<double>();
      e.reference_channel = s.at("reference_channel").get<int>();
      e.seed = s.at("seed").get<std::uint64_t>();
      m.scenes.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

std::vector<TrainExample> load_examples(const std::string& dataset_dir,
                                        const SceneManifest& manifest) {
  std::vector<TrainExample> out;
  out.reserve(manifest.scenes.size());
  for (const SceneEntry& s : manifest.scenes) {
    TrainExample ex;
    ex.mixture = read_wav((fs::path(dataset_dir) / s.mixture_file).string());
    MultiChannelWaveform clean = read_wav((fs::path(dataset_dir) / s.clean_file).string());
    if (s.reference_channel < 0 || s.reference_channel >= clean.num_channels())
      throw DataError("manifest scene " + s.id + ": reference channel out of range");
    ex.target = clean.channels[static_cast<size_t>(s.reference_channel)];
    if (ex.mixture.length() != ex.target.length())
      throw DataError("manifest scene " + s.id + ": clean/mixture length mismatch");
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace mcmask
