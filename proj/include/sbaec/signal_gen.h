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

#ifndef SBAEC_SIGNAL_GEN_H_
#define SBAEC_SIGNAL_GEN_H_

#include <cstdint>
#include <random>

#include "sbaec/time_signal.h"

namespace sbaec {

// Derives an independent stream seed from a base seed and a role tag, so one
// scenario seed drives several uncorrelated generators.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint32_t role);

// Standard-normal sampler with a fully specified sequence: mt19937_64 words
// mapped to uniforms explicitly, then Box-Muller. The C++ distribution
// classes are implementation-defined, which would break the bit-identical
// artifact guarantee across standard libraries.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  double Uniform() {  // [0, 1)
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  double Next();

 private:
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// White Gaussian noise with the given RMS amplitude.
TimeSignal GenerateWhiteNoise(double duration_s, int sample_rate, std::uint64_t seed,
                              double rms = 0.05);

// Deterministic speech-like test signal: resonator-colored noise with a
// wandering center frequency, syllabic amplitude bursts and longer pauses,
// peak-normalized to 0.5. A stand-in for recorded speech in self-contained
// experiments; no dataset needed.
TimeSignal GenerateSpeechLike(double duration_s, int sample_rate, std::uint64_t seed);

}  // namespace sbaec

#endif  // SBAEC_SIGNAL_GEN_H_
