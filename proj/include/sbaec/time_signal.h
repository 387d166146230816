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

#ifndef SBAEC_TIME_SIGNAL_H_
#define SBAEC_TIME_SIGNAL_H_

#include <cmath>
#include <cstddef>
#include <vector>

#include "sbaec/common.h"

namespace sbaec {

// Sampled real-valued waveform. Samples are dimensionless amplitudes with a
// nominal range of [-1, 1]; nothing enforces that range, only finiteness.
struct TimeSignal {
  std::vector<double> samples;
  int sample_rate = 0;

  TimeSignal() = default;
  TimeSignal(std::vector<double> s, int fs) : samples(std::move(s)), sample_rate(fs) {}

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

// Throws ArgumentError if the sample rate is non-positive or any sample is
// non-finite. `what` names the offending signal in the message.
void ValidateSignal(const TimeSignal& signal, const char* what);

inline double SignalPower(const TimeSignal& signal) {
  double sum = 0.0;
  for (double v : signal.samples) sum += v * v;
  return signal.samples.empty() ? 0.0 : sum / static_cast<double>(signal.samples.size());
}

inline double PeakAbs(const TimeSignal& signal) {
  double peak = 0.0;
  for (double v : signal.samples) peak = std::max(peak, std::fabs(v));
  return peak;
}

}  // namespace sbaec

#endif  // SBAEC_TIME_SIGNAL_H_
