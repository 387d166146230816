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

#ifndef SBAEC_NONLINEARITY_H_
#define SBAEC_NONLINEARITY_H_

#include <string>
#include <vector>

#include "sbaec/time_signal.h"

namespace sbaec {

enum class NonlinearKind { kIdentity, kHardClip, kSoftSaturation };

NonlinearKind ParseNonlinearKind(const std::string& name);
std::string NonlinearKindName(NonlinearKind kind);

// Memoryless loudspeaker nonlinearity. Both saturating kinds are odd,
// monotone and bounded by x_max:
//   hard clip:       f(x) = clamp(x, -x_max, x_max)
//   soft saturation: f(x) = x_max * x / (x_max^rho + |x|^rho)^(1/rho)
struct NonlinearModel {
  NonlinearKind kind = NonlinearKind::kIdentity;
  double x_max = 1.0;
  double rho = 2.0;  // soft saturation shape

  static NonlinearModel Identity() { return {}; }
  static NonlinearModel HardClip(double x_max);
  static NonlinearModel SoftSaturation(double x_max, double rho = 2.0);
};

double ApplySample(const NonlinearModel& model, double x);
TimeSignal ApplyNonlinearity(const NonlinearModel& model, const TimeSignal& x);

// The p odd-power basis signals of one far-end signal; signals[i] is the
// elementwise (2i+1)-th power, so signals[0] is the input itself.
struct BasisStack {
  int order = 0;
  std::vector<TimeSignal> signals;
};

BasisStack ExpandBasis(const TimeSignal& x, int order);

// Signal-to-distortion ratio 10*log10(E[x^2] / E[(f(x)-x)^2]) over the whole
// signal. Returns +infinity when the model leaves the signal untouched.
double MeasureSdr(const TimeSignal& x, const NonlinearModel& model);

// Finds the x_max for which the model distorts `x` to `target_sdr_db`,
// within 0.01 dB, by bisection on x_max in (0, max|x|]. Throws
// CalibrationError (reporting the achievable range) when the target lies
// outside what any threshold in that interval can produce.
NonlinearModel CalibrateSdr(const TimeSignal& x, NonlinearKind kind, double target_sdr_db,
                            double rho = 2.0);

}  // namespace sbaec

#endif  // SBAEC_NONLINEARITY_H_
