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

#include "sbaec/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "sbaec/common.h"

namespace sbaec {
namespace {

constexpr double kCapDb = 200.0;
// Floor for the window power sums; keeps all-zero windows finite and leaves
// any real signal energy untouched, so scaling both inputs by a power of two
// changes nothing.
constexpr double kPowerFloor = 1e-20;

double WindowRatioDb(double num, double den) {
  const double db = PowerToDb(std::max(num, kPowerFloor) / std::max(den, kPowerFloor));
  return std::clamp(db, -kCapDb, kCapDb);
}

MetricSeries SlidingRatio(const std::vector<double>& num_sq, const std::vector<double>& den_sq,
                          const MetricWindow& win, int sample_rate) {
  if (win.window < win.hop || win.hop <= 0) {
    throw ArgumentError("metric window must be >= hop and hop positive");
  }
  MetricSeries series;
  series.window = win.window;
  series.hop = win.hop;
  series.sample_rate = sample_rate;

  const std::size_t n = num_sq.size();
  const auto window = static_cast<std::size_t>(win.window);
  // Partial windows at the start are dropped; if the signal is shorter than
  // one window, fall back to a single full-signal value.
  if (n < window) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += num_sq[i];
      den += den_sq[i];
    }
    series.values_db.push_back(WindowRatioDb(num, den));
  } else {
    for (std::size_t start = 0; start + window <= n; start += static_cast<std::size_t>(win.hop)) {
      double num = 0.0, den = 0.0;
      for (std::size_t i = start; i < start + window; ++i) {
        num += num_sq[i];
        den += den_sq[i];
      }
      series.values_db.push_back(WindowRatioDb(num, den));
    }
  }

  const std::size_t count = series.values_db.size();
  const std::size_t tail = std::max<std::size_t>(1, (count + 4) / 5);  // final 20%, rounded up
  double sum = 0.0;
  for (std::size_t i = count - tail; i < count; ++i) sum += series.values_db[i];
  series.steady_state_db = sum / static_cast<double>(tail);
  return series;
}

std::vector<double> Squared(const TimeSignal& s) {
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s.samples[i] * s.samples[i];
  return out;
}

}  // namespace

MetricSeries Erle(const TimeSignal& microphone, const TimeSignal& estimate,
                  const MetricWindow& win) {
  if (microphone.size() != estimate.size()) {
    throw ShapeError("Erle: signal lengths differ");
  }
  return SlidingRatio(Squared(microphone), Squared(estimate), win, microphone.sample_rate);
}

MetricSeries Terle(const TimeSignal& echo, const TimeSignal& estimate,
                   const TimeSignal& near_end_scaled, const MetricWindow& win) {
  if (echo.size() != estimate.size() || echo.size() != near_end_scaled.size()) {
    throw ShapeError("Terle: signal lengths differ");
  }
  std::vector<double> residual_sq(echo.size());
  for (std::size_t i = 0; i < echo.size(); ++i) {
    const double r = estimate.samples[i] - near_end_scaled.samples[i];
    residual_sq[i] = r * r;
  }
  return SlidingRatio(Squared(echo), residual_sq, win, echo.sample_rate);
}

double MeasureEsr(const TimeSignal& echo, const TimeSignal& near_end) {
  if (echo.size() != near_end.size()) throw ShapeError("MeasureEsr: signal lengths differ");
  double echo_power = 0.0, near_power = 0.0;
  for (double v : echo.samples) echo_power += v * v;
  for (double v : near_end.samples) near_power += v * v;
  if (echo_power == 0.0 || near_power == 0.0) {
    throw ArgumentError("MeasureEsr: both signals must be non-silent");
  }
  return PowerToDb(echo_power / near_power);
}

void WriteMetricCsv(const std::string& path, const MetricSeries& series) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw IoError("cannot open for writing: " + path);
  file << "time_s,value_db\n";
  char line[64];
  for (std::size_t i = 0; i < series.values_db.size(); ++i) {
    std::snprintf(line, sizeof line, "%.6f,%.6f\n", series.TimeOfIndex(i),
                  series.values_db[i]);
    file << line;
  }
  if (!file) throw IoError("write failed: " + path);
}

}  // namespace sbaec
