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

#ifndef SBAEC_ROOM_H_
#define SBAEC_ROOM_H_

#include <array>
#include <optional>

#include "sbaec/nonlinearity.h"
#include "sbaec/time_signal.h"

namespace sbaec {

// Shoebox room for image-method simulation. A uniform wall reflection
// coefficient is derived from t60; coefficients that would exceed 1 are
// clamped, and small enough t60 values therefore degenerate to the anechoic
// (direct path only) response.
struct RoomSpec {
  std::array<double, 3> dimensions = {5.0, 4.0, 3.0};  // meters
  std::array<double, 3> source = {2.0, 3.0, 1.5};
  std::array<double, 3> mic = {2.5, 1.0, 1.2};
  double t60_s = 0.2;
  int rir_length = 3200;
  int sample_rate = 16000;
  double sound_speed = 343.0;
};

// Uniform wall reflection coefficient for the spec, clamped to [0, 1).
double ReflectionCoefficient(const RoomSpec& spec);

// Allen-Berkley image-method room impulse response. Image amplitudes are
// (reflection product)/(4*pi*distance) with delays rounded to the nearest
// sample; image order is chosen so every image that can land inside
// rir_length is included. Deterministic.
TimeSignal GenerateRir(const RoomSpec& spec);

// Full linear convolution truncated to the input length (FFT-based).
TimeSignal Convolve(const TimeSignal& signal, const TimeSignal& rir);

// One synthesized experiment: microphone = echo + scaled near end.
struct MixtureScenario {
  TimeSignal far_end;          // x, as fed to the loudspeaker model
  TimeSignal echo;             // d = rir * f(x)
  TimeSignal near_end_scaled;  // g * s, the near end actually mixed
  TimeSignal microphone;       // y = d + g*s samplewise
  double near_end_gain = 1.0;  // g
  std::optional<double> esr_target_db;
  double achieved_esr_db = 0.0;  // meaningful when esr_target_db has a value
};

// Builds the mixture y = rir * f(x) + g*s. When esr_target_db has a value, g
// is chosen so the echo-to-near-end power ratio hits the target; otherwise
// g = 1. Signals of unequal length are zero-padded to the longer one.
MixtureScenario SynthesizeMixture(const TimeSignal& far_end, const TimeSignal& near_end,
                                  const NonlinearModel& model, const TimeSignal& rir,
                                  std::optional<double> esr_target_db);

}  // namespace sbaec

#endif  // SBAEC_ROOM_H_
