// include/mcmask/model_io.hpp

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

#ifndef MCMASK_MODEL_IO_HPP
#define MCMASK_MODEL_IO_HPP

#include <string>

#include <json.hpp>

#include "mcmask/masking.hpp"
#include "mcmask/trainer.hpp"

namespace mcmask {

// Versioned JSON containers. Doubles round-trip exactly through nlohmann's
// shortest-representation dump, so saved parameters reload bit-identical.

nlohmann::json tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const nlohmann::json& j);

nlohmann::json encoder_bank_to_json(const EncoderBank& bank);
EncoderBank encoder_bank_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const SeparationModel& model);
SeparationModel model_from_json(const nlohmann::json& j);

void save_model(const std::string& path, const SeparationModel& model);
SeparationModel load_model(const std::string& path);

// Checkpoint = model + training metadata (+ free-form config echo).
void save_checkpoint(const std::string& path, const Checkpoint& ckpt,
                     const nlohmann::json& config_echo = nlohmann::json::object());
Checkpoint load_checkpoint(const std::string& path);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace mcmask

#endif  // MCMASK_MODEL_IO_HPP
