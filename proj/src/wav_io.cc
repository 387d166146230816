// Copyright 2026 The sbaec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sbaec/wav_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace sbaec {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void AppendU16(std::vector<unsigned char>* out, std::uint16_t v) {
  out->push_back(static_cast<unsigned char>(v & 0xff));
  out->push_back(static_cast<unsigned char>((v >> 8) & 0xff));
}

void AppendU32(std::vector<unsigned char>* out, std::uint32_t v) {
  out->push_back(static_cast<unsigned char>(v & 0xff));
  out->push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  out->push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  out->push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

void AppendTag(std::vector<unsigned char>* out, const char* tag) {
  out->insert(out->end(), tag, tag + 4);
}

}  // namespace

TimeSignal ReadWav(const std::string& path, int channel) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open WAV file: " + path);
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(file)),
                                  std::istreambuf_iterator<char>());
  if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0) {
    throw IoError("not a RIFF/WAVE file: " + path);
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* payload = nullptr;
  std::size_t payload_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const char* tag = reinterpret_cast<const char*>(data.data() + pos);
    const std::uint32_t chunk_size = ReadU32(data.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_size > data.size()) {
      throw IoError("truncated WAV chunk in " + path);
    }
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw IoError("fmt chunk too small in " + path);
      format = ReadU16(data.data() + body);
      channels = ReadU16(data.data() + body + 2);
      sample_rate = ReadU32(data.data() + body + 4);
      bits = ReadU16(data.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      payload = data.data() + body;
      payload_size = chunk_size;
    }
    pos = body + chunk_size + (chunk_size % 2);  // chunks are word-aligned
  }

  if (!have_fmt || payload == nullptr) {
    throw IoError("WAV file missing fmt or data chunk: " + path);
  }
  if (channels == 0) throw IoError("WAV file reports zero channels: " + path);
  if (channel < 0 || channel >= channels) {
    throw IoError("channel " + std::to_string(channel) + " out of range, file has " +
                  std::to_string(channels) + " channel(s): " + path);
  }

  const bool pcm16 = (format == kFormatPcm && bits == 16);
  const bool float32 = (format == kFormatFloat && bits == 32);
  if (!pcm16 && !float32) {
    throw IoError("unsupported WAV encoding (format tag " + std::to_string(format) + ", " +
                  std::to_string(bits) + " bits/sample) in " + path +
                  "; only 16-bit PCM and 32-bit IEEE float are supported");
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_size = bytes_per_sample * channels;
  const std::size_t num_frames = payload_size / frame_size;

  TimeSignal out;
  out.sample_rate = static_cast<int>(sample_rate);
  out.samples.resize(num_frames);
  for (std::size_t i = 0; i < num_frames; ++i) {
    const unsigned char* p = payload + i * frame_size + channel * bytes_per_sample;
    if (pcm16) {
      const auto v = static_cast<std::int16_t>(ReadU16(p));
      out.samples[i] = static_cast<double>(v) / 32768.0;
    } else {
      std::uint32_t raw = ReadU32(p);
      float f;
      std::memcpy(&f, &raw, sizeof f);
      out.samples[i] = static_cast<double>(f);
    }
  }
  ValidateSignal(out, ("WAV " + path).c_str());
  return out;
}

void WriteWav(const std::string& path, const TimeSignal& signal, WavFormat format) {
  ValidateSignal(signal, "WriteWav");
  const bool pcm = (format == WavFormat::kPcm16);
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t fs = static_cast<std::uint32_t>(signal.sample_rate);
  const std::uint32_t n = static_cast<std::uint32_t>(signal.samples.size());
  const std::uint32_t data_bytes = n * (bits / 8);
  // PCM gets the minimal 16-byte fmt; float gets the 18-byte fmt plus a fact
  // chunk, as the format spec asks for non-PCM encodings.
  const std::uint32_t fmt_size = pcm ? 16 : 18;
  const std::uint32_t riff_size = 4 + (8 + fmt_size) + (pcm ? 0 : 12) + 8 + data_bytes;

  std::vector<unsigned char> out;
  out.reserve(riff_size + 8);
  AppendTag(&out, "RIFF");
  AppendU32(&out, riff_size);
  AppendTag(&out, "WAVE");
  AppendTag(&out, "fmt ");
  AppendU32(&out, fmt_size);
  AppendU16(&out, pcm ? kFormatPcm : kFormatFloat);
  AppendU16(&out, 1);  // mono
  AppendU32(&out, fs);
  AppendU32(&out, fs * (bits / 8));
  AppendU16(&out, static_cast<std::uint16_t>(bits / 8));
  AppendU16(&out, bits);
  if (!pcm) {
    AppendU16(&out, 0);  // cbSize
    AppendTag(&out, "fact");
    AppendU32(&out, 4);
    AppendU32(&out, n);
  }
  AppendTag(&out, "data");
  AppendU32(&out, data_bytes);
  for (double x : signal.samples) {
    if (pcm) {
      const double scaled = std::lround(x * 32768.0);
      const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
      AppendU16(&out, static_cast<std::uint16_t>(v));
    } else {
      const float f = static_cast<float>(x);
      std::uint32_t raw;
      std::memcpy(&raw, &f, sizeof raw);
      AppendU32(&out, raw);
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open for writing: " + path);
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("write failed: " + path);
}

}  // namespace sbaec
