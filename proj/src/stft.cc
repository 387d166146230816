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

#include "sbaec/stft.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "real_fft.h"
#include "sbaec/common.h"

namespace sbaec {
namespace {

std::vector<double> PeriodicHann(int size) {
  std::vector<double> w(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) {
    w[static_cast<std::size_t>(i)] =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / size);
  }
  return w;
}

std::vector<double> MakeWindow(WindowType type, int size, bool analysis) {
  switch (type) {
    case WindowType::kSqrtHann: {
      std::vector<double> w = PeriodicHann(size);
      for (double& v : w) v = std::sqrt(v);
      return w;
    }
    case WindowType::kHann:
      if (analysis) return PeriodicHann(size);
      return std::vector<double>(static_cast<std::size_t>(size), 1.0);
    case WindowType::kRect:
      return std::vector<double>(static_cast<std::size_t>(size), 1.0);
  }
  throw ArgumentError("unknown window type");
}

}  // namespace

WindowType ParseWindowType(const std::string& name) {
  if (name == "sqrt_hann") return WindowType::kSqrtHann;
  if (name == "hann") return WindowType::kHann;
  if (name == "rect") return WindowType::kRect;
  throw ConfigError("unknown window type '" + name + "' (expected sqrt_hann, hann or rect)");
}

std::string WindowTypeName(WindowType type) {
  switch (type) {
    case WindowType::kSqrtHann: return "sqrt_hann";
    case WindowType::kHann: return "hann";
    case WindowType::kRect: return "rect";
  }
  return "?";
}

std::vector<double> AnalysisWindow(const StftConfig& cfg) {
  return MakeWindow(cfg.window, cfg.fft_size, /*analysis=*/true);
}

std::vector<double> SynthesisWindow(const StftConfig& cfg) {
  return MakeWindow(cfg.window, cfg.fft_size, /*analysis=*/false);
}

void ValidateStftConfig(const StftConfig& cfg) {
  if (cfg.fft_size <= 0 || cfg.fft_size % 2 != 0) {
    throw ConfigError("fft_size must be positive and even, got " +
                      std::to_string(cfg.fft_size));
  }
  if (cfg.hop <= 0 || cfg.hop > cfg.fft_size) {
    throw ConfigError("hop must satisfy 0 < hop <= fft_size, got hop=" +
                      std::to_string(cfg.hop));
  }
  // COLA: the tiled sum of the analysis*synthesis window product over all
  // hop shifts must be constant in the sample position.
  const std::vector<double> a = AnalysisWindow(cfg);
  const std::vector<double> s = SynthesisWindow(cfg);
  std::vector<double> tiled(static_cast<std::size_t>(cfg.hop), 0.0);
  for (int i = 0; i < cfg.fft_size; ++i) {
    tiled[static_cast<std::size_t>(i % cfg.hop)] +=
        a[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(i)];
  }
  const auto [mn, mx] = std::minmax_element(tiled.begin(), tiled.end());
  if (*mn <= 0.0 || (*mx - *mn) > 1e-9 * *mx) {
    throw ConfigError("window '" + WindowTypeName(cfg.window) + "' with fft_size " +
                      std::to_string(cfg.fft_size) + " and hop " + std::to_string(cfg.hop) +
                      " does not satisfy the overlap-add (COLA) condition");
  }
}

double SpectrogramEnergy(const Spectrogram& spec) {
  double total = 0.0;
  for (const auto& frame : spec.frames) {
    for (const std::complex<double>& bin : frame) total += std::norm(bin);
  }
  return total;
}

int NumStftFrames(std::size_t length, const StftConfig& cfg) {
  // Front pad of (fft_size - hop) zeros; frames advance by hop until every
  // padded input sample has been covered by a frame start.
  const std::size_t pad = static_cast<std::size_t>(cfg.fft_size - cfg.hop);
  const std::size_t last = pad + length - 1;
  return static_cast<int>(last / static_cast<std::size_t>(cfg.hop)) + 1;
}

Spectrogram Stft(const TimeSignal& signal, const StftConfig& cfg) {
  ValidateStftConfig(cfg);
  if (signal.empty()) throw ArgumentError("Stft: signal is empty");

  const int num_frames = NumStftFrames(signal.size(), cfg);
  const std::size_t pad = static_cast<std::size_t>(cfg.fft_size - cfg.hop);
  const std::size_t padded_len =
      static_cast<std::size_t>(num_frames - 1) * cfg.hop + cfg.fft_size;
  std::vector<double> padded(padded_len, 0.0);
  std::copy(signal.samples.begin(), signal.samples.end(), padded.begin() + pad);

  const std::vector<double> window = AnalysisWindow(cfg);
  RealFft fft(cfg.fft_size);
  std::vector<double> frame(static_cast<std::size_t>(cfg.fft_size));

  Spectrogram spec;
  spec.fft_size = cfg.fft_size;
  spec.hop = cfg.hop;
  spec.frames.resize(static_cast<std::size_t>(num_frames));
  for (int n = 0; n < num_frames; ++n) {
    const std::size_t start = static_cast<std::size_t>(n) * cfg.hop;
    for (int i = 0; i < cfg.fft_size; ++i) {
      frame[static_cast<std::size_t>(i)] =
          padded[start + i] * window[static_cast<std::size_t>(i)];
    }
    auto& bins = spec.frames[static_cast<std::size_t>(n)];
    bins.resize(static_cast<std::size_t>(cfg.num_bins()));
    fft.Forward(frame, bins);
  }
  return spec;
}

TimeSignal Istft(const Spectrogram& spec, const StftConfig& cfg, std::size_t length,
                 int sample_rate) {
  ValidateStftConfig(cfg);
  if (spec.fft_size != cfg.fft_size || spec.hop != cfg.hop) {
    throw ShapeError("Istft: spectrogram fft_size/hop do not match the config");
  }
  const std::size_t num_bins = static_cast<std::size_t>(cfg.num_bins());
  for (const auto& f : spec.frames) {
    if (f.size() != num_bins) {
      throw ShapeError("Istft: frame has " + std::to_string(f.size()) + " bins, expected " +
                       std::to_string(num_bins));
    }
  }

  const std::size_t num_frames = spec.frames.size();
  const std::size_t padded_len =
      (num_frames == 0 ? 0 : (num_frames - 1) * cfg.hop + cfg.fft_size);
  std::vector<double> acc(padded_len, 0.0);
  std::vector<double> norm(padded_len, 0.0);

  const std::vector<double> analysis = AnalysisWindow(cfg);
  const std::vector<double> synthesis = SynthesisWindow(cfg);
  RealFft fft(cfg.fft_size);
  std::vector<double> frame(static_cast<std::size_t>(cfg.fft_size));

  for (std::size_t n = 0; n < num_frames; ++n) {
    fft.Inverse(spec.frames[n], frame);
    const std::size_t start = n * cfg.hop;
    for (int i = 0; i < cfg.fft_size; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      acc[start + ui] += frame[ui] * synthesis[ui];
      norm[start + ui] += analysis[ui] * synthesis[ui];
    }
  }

  const std::size_t pad = static_cast<std::size_t>(cfg.fft_size - cfg.hop);
  TimeSignal out;
  out.sample_rate = sample_rate;
  out.samples.assign(length, 0.0);
  for (std::size_t i = 0; i < length && pad + i < padded_len; ++i) {
    if (norm[pad + i] > 1e-12) out.samples[i] = acc[pad + i] / norm[pad + i];
  }
  return out;
}

}  // namespace sbaec
