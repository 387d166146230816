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

#ifndef SBAEC_METRICS_H_
#define SBAEC_METRICS_H_

#include <string>
#include <vector>

#include "sbaec/time_signal.h"

namespace sbaec {

// Defaults for the sliding expectation estimator: 1 s window, 0.25 s hop
// at 16 kHz.
struct MetricWindow {
  int window = 16000;
  int hop = 4000;
};

// A dB-valued metric evaluated on a sliding window. Values are clamped to
// [-200, 200] dB so silence in either power sum stays finite.
struct MetricSeries {
  std::vector<double> values_db;
  int window = 0;
  int hop = 0;
  int sample_rate = 0;
  double steady_state_db = 0.0;  // mean of the final 20% of values

  double TimeOfIndex(std::size_t i) const {
    // center of the i-th window
    return (static_cast<double>(i) * hop + 0.5 * window) / sample_rate;
  }
};

// Echo return loss enhancement: 10*log10(sum y^2 / sum e^2) per window.
MetricSeries Erle(const TimeSignal& microphone, const TimeSignal& estimate,
                  const MetricWindow& win = {});

// True ERLE: 10*log10(sum d^2 / sum (e - s)^2) per window, where s is the
// scaled near end actually present in the mixture.
MetricSeries Terle(const TimeSignal& echo, const TimeSignal& estimate,
                   const TimeSignal& near_end_scaled, const MetricWindow& win = {});

// Full-signal echo-to-near-end power ratio in dB.
double MeasureEsr(const TimeSignal& echo, const TimeSignal& near_end);

// CSV with header "time_s,value_db", one row per hop, 6 decimals.
void WriteMetricCsv(const std::string& path, const MetricSeries& series);

}  // namespace sbaec

#endif  // SBAEC_METRICS_H_
