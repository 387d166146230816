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

#ifndef SBAEC_WAV_IO_H_
#define SBAEC_WAV_IO_H_

#include <string>

#include "sbaec/time_signal.h"

namespace sbaec {

enum class WavFormat {
  kPcm16,    // 16-bit PCM, samples quantized as round(x * 32768) clamped
  kFloat32,  // IEEE float, samples stored as float(x)
};

// Reads one channel of a RIFF/WAVE file. PCM16 samples are normalized by
// 1/32768. Throws IoError for missing files, malformed RIFF structure, and
// unsupported encodings (anything but PCM16 / float32).
TimeSignal ReadWav(const std::string& path, int channel = 0);

// Writes a mono WAV file.
void WriteWav(const std::string& path, const TimeSignal& signal,
              WavFormat format = WavFormat::kFloat32);

}  // namespace sbaec

#endif  // SBAEC_WAV_IO_H_
