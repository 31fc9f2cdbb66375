// src/model_io.cpp

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

#include "mcmask/model_io.hpp"

#include <fstream>

namespace mcmask {

namespace {

constexpr int kContainerVersion = 1;

void check_version(const nlohmann::json& j, const char* what) {
  if (!j.contains("version") || j["version"].get<int>() != kContainerVersion)
    throw DataError(std::string(what) + ": missing or unsupported container version");
}

}  // namespace

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << j.dump(1) << "\n";
  if (!out) throw DataError("write failed: " + path);
}

nlohmann::json tensor_to_json(const Tensor& t) {
  nlohmann::json j;
  j["shape"] = t.shape();
  j["data"] = std::vector<double>(t.data().begin(), t.data().end());
  return j;
}

Tensor tensor_from_json(const nlohmann::json& j) {
  try {
    auto shape = j.at("shape").get<std::vector<int>>();
    auto data = j.at("data").get<std::vector<double>>();
    return Tensor(std::move(shape), std::move(data));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed tensor: ") + e.what());
  } catch (const ShapeError& e) {
    throw DataError(std::string("malformed tensor: ") + e.what());
  }
}

nlohmann::json encoder_bank_to_json(const EncoderBank& bank) {
  nlohmann::json j;
  j["version"] = kContainerVersion;
  j["shared"] = bank.shared;
  j["filters"] = nlohmann::json::array();
  for (const Tensor& f : bank.filters) j["filters"].push_back(tensor_to_json(f));
  return j;
}

EncoderBank encoder_bank_from_json(const nlohmann::json& j) {
  check_version(j, "encoder bank");
  EncoderBank bank;
  try {
    bank.shared = j.at("shared").get<bool>();
    for (const auto& f : j.at("filters")) bank.filters.push_back(tensor_from_json(f));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed encoder bank: ") + e.what());
  }
  if (bank.filters.empty()) throw DataError("encoder bank has no filters");
  return bank;
}

namespace {

nlohmann::json estimator_to_json(const MaskEstimator& est) {
  nlohmann::json j;
  j["input_channels"] = est.input_channels;
  j["output_channels"] = est.output_channels;
  j["num_features"] = est.num_features;
  j["hidden_dims"] = est.hidden_dims;
  j["with_bias"] = est.with_bias;
  j["branches"] = nlohmann::json::array();
  for (const auto& br : est.branches) {
    nlohmann::json b;
    b["input_blocks"] = nlohmann::json::array();
    for (const Tensor& t : br.input_blocks) b["input_blocks"].push_back(tensor_to_json(t));
    b["weights"] = nlohmann::json::array();
    for (const Tensor& t : br.weights) b["weights"].push_back(tensor_to_json(t));
    b["biases"] = nlohmann::json::array();
    for (const Tensor& t : br.biases) b["biases"].push_back(tensor_to_json(t));
    b["alphas"] = nlohmann::json::array();
    for (const Tensor& t : br.alphas) b["alphas"].push_back(tensor_to_json(t));
    j["branches"].push_back(std::move(b));
  }
  return j;
}

MaskEstimator estimator_from_json(const nlohmann::json& j) {
  MaskEstimator est;
  try {
    est.input_channels = j.at("input_channels").get<int>();
    est.output_channels = j.at("output_channels").get<int>();
    est.num_features = j.at("num_features").get<int>();
    est.hidden_dims = j.at("hidden_dims").get<std::vector<int>>();
    est.with_bias = j.at("with_bias").get<bool>();
    for (const auto& b : j.at("branches")) {
      MaskEstimator::Branch br;
      for (const auto& t : b.at("input_blocks")) br.input_blocks.push_back(tensor_from_json(t));
      for (const auto& t : b.at("weights")) br.weights.push_back(tensor_from_json(t));
      for (const auto& t : b.at("biases")) br.biases.push_back(tensor_from_json(t));
      for (const auto& t : b.at("alphas")) br.alphas.push_back(tensor_from_json(t));
      est.branches.push_back(std::move(br));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed estimator: ") + e.what());
  }
  return est;
}

}  // namespace

nlohmann::json model_to_json(const SeparationModel& model) {
  nlohmann::json j;
  j["version"] = kContainerVersion;
  j["frame_length"] = model.frame_length;
  j["hop"] = model.hop;
  j["reference_channel"] = model.reference_channel;
  j["encoder"] = encoder_bank_to_json(model.encoder);
  j["estimator"] = estimator_to_json(model.estimator);
  j["decoder"] = tensor_to_json(model.decoder.matrix);
  return j;
}

SeparationModel model_from_json(const nlohmann::json& j) {
  check_version(j, "model");
  SeparationModel model;
  try {
    model.frame_length = j.at("frame_length").get<int>();
    model.hop = j.at("hop").get<int>();
    model.reference_channel = j.at("reference_channel").get<int>();
    model.encoder = encoder_bank_from_json(j.at("encoder"));
    model.estimator = estimator_from_json(j.at("estimator"));
    model.decoder.matrix = tensor_from_json(j.at("decoder"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model: ") + e.what());
  }
  try {
    model.validate();
  } catch (const ShapeError& e) {
    throw DataError(std::string("inconsistent model container: ") + e.what());
  }
  return model;
}

void save_model(const std::string& path, const SeparationModel& model) {
  save_json_file(path, model_to_json(model));
}

SeparationModel load_model(const std::string& path) {
  return model_from_json(load_json_file(path));
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt,
                     const nlohmann::json& config_echo) {
  nlohmann::json j;
  j["version"] = kContainerVersion;
  j["model"] = model_to_json(ckpt.model);
  j["epoch"] = ckpt.epoch;
  j["validation_loss"] = ckpt.validation_loss;
  j["config"] = config_echo;
  save_json_file(path, j);
}

Checkpoint load_checkpoint(const std::string& path) {
  nlohmann::json j = load_json_file(path);
  check_version(j, "checkpoint");
  Checkpoint ckpt;
  try {
    ckpt.model = model_from_json(j.at("model"));
    ckpt.epoch = j.at("epoch").get<int>();
    ckpt.validation_loss = j.at("validation_loss").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
  return ckpt;
}

}  // namespace mcmask
