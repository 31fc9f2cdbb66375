// src/wav.cpp

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

#include "mcmask/wav.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace mcmask {

namespace {

// Little-endian byte-level readers; host is assumed little-endian for the
// float reinterpretation (checked at runtime below).
std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void append_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xFF));
}

void append_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
}

void append_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

}  // namespace

MultiChannelWaveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open WAV file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw DataError("not a RIFF/WAVE file: " + path);

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::uint32_t data_size = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* tag = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t chunk_size = read_u32(bytes.data() + pos + 4);
    const size_t body = pos + 8;
    if (body + chunk_size > bytes.size())
      throw DataError("truncated chunk in WAV file: " + path);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw DataError("malformed fmt chunk: " + path);
      format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!data) throw DataError("WAV file has no data chunk: " + path);
  if (channels == 0 || rate == 0) throw DataError("WAV file has no fmt chunk: " + path);
  const bool is_pcm16 = format == kFormatPcm && bits == 16;
  const bool is_float32 = format == kFormatFloat && bits == 32;
  if (!is_pcm16 && !is_float32)
    throw DataError("unsupported WAV format (want 16-bit PCM or 32-bit float): " + path);

  const std::uint32_t bytes_per_sample = bits / 8;
  const std::uint32_t frame_bytes = bytes_per_sample * channels;
  const std::uint32_t frames = data_size / frame_bytes;

  MultiChannelWaveform out;
  out.channels.resize(channels);
  for (auto& ch : out.channels) {
    ch.sample_rate = static_cast<int>(rate);
    ch.samples.resize(frames);
  }
  for (std::uint32_t f = 0; f < frames; ++f) {
    for (std::uint16_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + static_cast<size_t>(f) * frame_bytes + c * bytes_per_sample;
      double v;
      if (is_pcm16) {
        const std::int16_t s = static_cast<std::int16_t>(read_u16(p));
        v = static_cast<double>(s) / 32768.0;
      } else {
        const std::uint32_t u = read_u32(p);
        float fv;
        static_assert(sizeof(fv) == 4);
        std::memcpy(&fv, &u, 4);
        v = static_cast<double>(fv);
      }
      out.channels[c].samples[f] = v;
    }
  }
  out.validate();
  return out;
}

void write_wav(const std::string& path, const MultiChannelWaveform& audio) {
  audio.validate();
  const int channels = audio.num_channels();
  const int frames = audio.length();
  const int rate = audio.sample_rate();

  std::vector<unsigned char> out;
  out.reserve(60 + static_cast<size_t>(frames) * channels * 4);
  append_tag(out, "RIFF");
  append_u32(out, 0);  // patched below
  append_tag(out, "WAVE");

  append_tag(out, "fmt ");
  append_u32(out, 16);
  append_u16(out, kFormatFloat);
  append_u16(out, static_cast<std::uint16_t>(channels));
  append_u32(out, static_cast<std::uint32_t>(rate));
  append_u32(out, static_cast<std::uint32_t>(rate) * channels * 4);  // byte rate
  append_u16(out, static_cast<std::uint16_t>(channels * 4));         // block align
  append_u16(out, 32);

  // float formats carry a fact chunk with the frame count
  append_tag(out, "fact");
  append_u32(out, 4);
  append_u32(out, static_cast<std::uint32_t>(frames));

  append_tag(out, "data");
  append_u32(out, static_cast<std::uint32_t>(frames) * channels * 4);
  for (int f = 0; f < frames; ++f) {
    for (int c = 0; c < channels; ++c) {
      const float v = static_cast<float>(audio.channels[static_cast<size_t>(c)].samples[static_cast<size_t>(f)]);
      std::uint32_t u;
      std::memcpy(&u, &v, 4);
      append_u32(out, u);
    }
  }
  const std::uint32_t riff_size = static_cast<std::uint32_t>(out.size()) - 8;
  out[4] = static_cast<unsigned char>(riff_size & 0xFF);
  out[5] = static_cast<unsigned char>((riff_size >> 8) & 0xFF);
  out[6] = static_cast<unsigned char>((riff_size >> 16) & 0xFF);
  out[7] = static_cast<unsigned char>((riff_size >> 24) & 0xFF);

  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot open for writing: " + path);
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw DataError("write failed: " + path);
}

void write_wav(const std::string& path, const Waveform& audio) {
  MultiChannelWaveform mc;
  mc.channels.push_back(audio);
  write_wav(path, mc);
}

}  // namespace mcmask
