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

#ifndef SBAEC_STFT_H_
#define SBAEC_STFT_H_

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "sbaec/time_signal.h"

namespace sbaec {

enum class WindowType {
  kSqrtHann,  // sqrt(periodic Hann) analysis and synthesis
  kHann,      // periodic Hann analysis, rectangular synthesis (plain OLA)
  kRect,      // rectangular both; COLA only when hop == fft_size or hop | fft_size
};

WindowType ParseWindowType(const std::string& name);
std::string WindowTypeName(WindowType type);

struct StftConfig {
  int fft_size = 4096;  // 256 ms at 16 kHz
  int hop = 1024;       // 75% overlap
  WindowType window = WindowType::kSqrtHann;

  int num_bins() const { return fft_size / 2 + 1; }
};

// Validates sizes and the weighted-overlap-add (COLA) condition for the
// window pair at the given hop. Throws ConfigError on violation.
void ValidateStftConfig(const StftConfig& cfg);

// One-sided complex spectrogram; frame n covers input samples
// [n*hop - pad, n*hop - pad + fft_size) where pad = fft_size - hop.
struct Spectrogram {
  std::vector<std::vector<std::complex<double>>> frames;
  int fft_size = 0;
  int hop = 0;

  int num_bins() const { return fft_size / 2 + 1; }
  std::size_t num_frames() const { return frames.size(); }
};

// Sum of |X(k,n)|^2 over all frames and bins.
double SpectrogramEnergy(const Spectrogram& spec);

// Number of analysis frames Stft() produces for a signal of `length` samples.
int NumStftFrames(std::size_t length, const StftConfig& cfg);

// Windowed STFT with zero padding at both ends so every input sample has
// full window coverage.
Spectrogram Stft(const TimeSignal& signal, const StftConfig& cfg);

// Weighted overlap-add synthesis, trimmed to `length` samples. The spectrogram
// must have been produced with the same config.
TimeSignal Istft(const Spectrogram& spec, const StftConfig& cfg, std::size_t length,
                 int sample_rate);

// Analysis / synthesis windows of length cfg.fft_size.
std::vector<double> AnalysisWindow(const StftConfig& cfg);
std::vector<double> SynthesisWindow(const StftConfig& cfg);

}  // namespace sbaec

#endif  // SBAEC_STFT_H_
