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

#include "sbaec/signal_gen.h"

#include <cmath>
#include <numbers>

#include "sbaec/common.h"

namespace sbaec {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void CheckGenArgs(double duration_s, int sample_rate) {
  if (sample_rate <= 0) throw ArgumentError("sample rate must be positive");
  if (!(duration_s > 0.0)) throw ArgumentError("duration must be positive");
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t base, std::uint32_t role) {
  return SplitMix64(SplitMix64(base) ^ (static_cast<std::uint64_t>(role) + 1));
}

double GaussianSampler::Next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 is kept away from zero so the log is finite.
  double u1 = 0.0;
  do {
    u1 = Uniform();
  } while (u1 <= 0.0);
  const double u2 = Uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

TimeSignal GenerateWhiteNoise(double duration_s, int sample_rate, std::uint64_t seed,
                              double rms) {
  CheckGenArgs(duration_s, sample_rate);
  // rms 0 is allowed: a silent track stands in for an absent source.
  if (!(rms >= 0.0)) throw ArgumentError("noise rms must be non-negative");
  const auto count = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  TimeSignal out;
  out.sample_rate = sample_rate;
  out.samples.resize(count);
  GaussianSampler gauss(seed);
  for (auto& s : out.samples) s = rms * gauss.Next();
  return out;
}

TimeSignal GenerateSpeechLike(double duration_s, int sample_rate, std::uint64_t seed) {
  CheckGenArgs(duration_s, sample_rate);
  const auto count = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  TimeSignal out;
  out.sample_rate = sample_rate;
  out.samples.resize(count);

  GaussianSampler gauss(seed);
  // Random phases decorrelate the modulation patterns of independent talkers.
  const double tau = 2.0 * std::numbers::pi;
  const double sweep_phase0 = tau * gauss.Uniform();
  const double sweep_phase1 = tau * gauss.Uniform();
  const double syllable_phase = tau * gauss.Uniform();
  const double pause_phase = tau * gauss.Uniform();

  // Two-pole resonator; pole radius sets the formant bandwidth.
  const double pole_radius = 0.96;
  double y1 = 0.0;
  double y2 = 0.0;
  double peak = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    const double t = static_cast<double>(n) / sample_rate;
    // Center frequency wanders over 300..1600 Hz at two incommensurate rates.
    const double center_hz = 950.0 + 450.0 * std::sin(tau * 0.35 * t + sweep_phase0) +
                             200.0 * std::sin(tau * 0.9 * t + sweep_phase1);
    const double theta = tau * center_hz / sample_rate;
    const double white = gauss.Next();
    const double resonated =
        2.0 * pole_radius * std::cos(theta) * y1 - pole_radius * pole_radius * y2 +
        (1.0 - pole_radius) * white;
    y2 = y1;
    y1 = resonated;

    // Syllabic bursts near 2.4 Hz, with longer pauses gating whole phrases.
    const double burst = std::max(0.0, std::sin(tau * 2.4 * t + syllable_phase));
    const double syllable = 0.04 + 0.96 * std::pow(burst, 1.3);
    const double pause = std::sin(tau * 0.13 * t + pause_phase) > -0.55 ? 1.0 : 0.05;
    const double sample = (0.92 * resonated + 0.08 * 0.04 * white) * syllable * pause;
    out.samples[n] = sample;
    peak = std::max(peak, std::abs(sample));
  }
  if (peak > 0.0) {
    const double gain = 0.5 / peak;
    for (auto& s : out.samples) s *= gain;
  }
  return out;
}

}  // namespace sbaec
