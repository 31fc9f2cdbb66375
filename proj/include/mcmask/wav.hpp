// include/mcmask/wav.hpp

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

#ifndef MCMASK_WAV_HPP
#define MCMASK_WAV_HPP

#include <string>

#include "mcmask/framing.hpp"

namespace mcmask {

// RIFF/WAVE reader: accepts 16-bit PCM and 32-bit IEEE float, interleaved.
MultiChannelWaveform read_wav(const std::string& path);

// Writes interleaved 32-bit IEEE float.
void write_wav(const std::string& path, const MultiChannelWaveform& audio);
void write_wav(const std::string& path, const Waveform& audio);

}  // namespace mcmask

#endif  // MCMASK_WAV_HPP
