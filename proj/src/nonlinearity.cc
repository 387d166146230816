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

#include "sbaec/nonlinearity.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sbaec {
namespace {

void ValidateModel(const NonlinearModel& model) {
  if (model.kind == NonlinearKind::kIdentity) return;
  if (!(model.x_max > 0.0)) {
    throw ArgumentError("nonlinear model x_max must be positive, got " +
                        std::to_string(model.x_max));
  }
  if (model.kind == NonlinearKind::kSoftSaturation && !(model.rho > 0.0)) {
    throw ArgumentError("soft saturation rho must be positive, got " +
                        std::to_string(model.rho));
  }
}

double MeasureSdrWithThreshold(const TimeSignal& x, NonlinearKind kind, double x_max,
                               double rho) {
  NonlinearModel m{kind, x_max, rho};
  return MeasureSdr(x, m);
}

}  // namespace

NonlinearKind ParseNonlinearKind(const std::string& name) {
  if (name == "identity") return NonlinearKind::kIdentity;
  if (name == "hard_clip" || name == "hard") return NonlinearKind::kHardClip;
  if (name == "soft_saturation" || name == "soft") return NonlinearKind::kSoftSaturation;
  throw ConfigError("unknown nonlinearity kind '" + name +
                    "' (expected identity, hard_clip or soft_saturation)");
}

std::string NonlinearKindName(NonlinearKind kind) {
  switch (kind) {
    case NonlinearKind::kIdentity: return "identity";
    case NonlinearKind::kHardClip: return "hard_clip";
    case NonlinearKind::kSoftSaturation: return "soft_saturation";
  }
  return "?";
}

NonlinearModel NonlinearModel::HardClip(double x_max) {
  NonlinearModel m{NonlinearKind::kHardClip, x_max, 2.0};
  ValidateModel(m);
  return m;
}

NonlinearModel NonlinearModel::SoftSaturation(double x_max, double rho) {
  NonlinearModel m{NonlinearKind::kSoftSaturation, x_max, rho};
  ValidateModel(m);
  return m;
}

double ApplySample(const NonlinearModel& model, double x) {
  switch (model.kind) {
    case NonlinearKind::kIdentity:
      return x;
    case NonlinearKind::kHardClip:
      return std::clamp(x, -model.x_max, model.x_max);
    case NonlinearKind::kSoftSaturation: {
      if (x == 0.0) return 0.0;
      const double denom = std::pow(
          std::pow(model.x_max, model.rho) + std::pow(std::fabs(x), model.rho),
          1.0 / model.rho);
      return model.x_max * x / denom;
    }
  }
  return x;
}

TimeSignal ApplyNonlinearity(const NonlinearModel& model, const TimeSignal& x) {
  ValidateModel(model);
  if (model.kind == NonlinearKind::kIdentity) return x;
  TimeSignal out = x;
  for (double& v : out.samples) v = ApplySample(model, v);
  return out;
}

BasisStack ExpandBasis(const TimeSignal& x, int order) {
  if (order < 1) {
    throw ArgumentError("basis expansion order must be >= 1, got " + std::to_string(order));
  }
  BasisStack stack;
  stack.order = order;
  stack.signals.reserve(static_cast<std::size_t>(order));
  stack.signals.push_back(x);  // phi_1(x) = x
  // phi_i(x) = x^(2i-1), built by repeated multiplication with x^2.
  TimeSignal power = x;
  for (int i = 2; i <= order; ++i) {
    for (std::size_t t = 0; t < power.samples.size(); ++t) {
      power.samples[t] *= x.samples[t] * x.samples[t];
    }
    stack.signals.push_back(power);
  }
  return stack;
}

double MeasureSdr(const TimeSignal& x, const NonlinearModel& model) {
  ValidateModel(model);
  double signal_energy = 0.0;
  double distortion_energy = 0.0;
  for (double v : x.samples) {
    const double f = ApplySample(model, v);
    signal_energy += v * v;
    distortion_energy += (f - v) * (f - v);
  }
  if (distortion_energy == 0.0) return std::numeric_limits<double>::infinity();
  return PowerToDb(signal_energy / distortion_energy);
}

NonlinearModel CalibrateSdr(const TimeSignal& x, NonlinearKind kind, double target_sdr_db,
                            double rho) {
  if (kind == NonlinearKind::kIdentity) {
    throw ArgumentError("cannot calibrate SDR for the identity model");
  }
  const double peak = PeakAbs(x);
  if (peak == 0.0) throw ArgumentError("cannot calibrate SDR on a silent signal");

  double lo = peak * 1e-9;
  double hi = peak;
  const double sdr_lo = MeasureSdrWithThreshold(x, kind, lo, rho);
  const double sdr_hi = MeasureSdrWithThreshold(x, kind, hi, rho);
  if (!(target_sdr_db > sdr_lo) || !(target_sdr_db < sdr_hi)) {
    throw CalibrationError(
        "SDR target " + std::to_string(target_sdr_db) + " dB is outside the achievable range (" +
        std::to_string(sdr_lo) + ", " +
        (std::isinf(sdr_hi) ? std::string("inf") : std::to_string(sdr_hi)) +
        ") dB for " + NonlinearKindName(kind) + " on this signal");
  }

  constexpr double kToleranceDb = 0.01;
  constexpr int kMaxIterations = 200;
  double mid = hi;
  for (int i = 0; i < kMaxIterations; ++i) {
    mid = 0.5 * (lo + hi);
    const double sdr = MeasureSdrWithThreshold(x, kind, mid, rho);
    if (std::fabs(sdr - target_sdr_db) <= kToleranceDb) break;
    // SDR grows with x_max: larger threshold, less distortion.
    if (sdr < target_sdr_db) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  NonlinearModel model{kind, mid, rho};
  const double achieved = MeasureSdr(x, model);
  if (std::fabs(achieved - target_sdr_db) > kToleranceDb) {
    throw CalibrationError("SDR bisection failed to converge: achieved " +
                           std::to_string(achieved) + " dB for target " +
                           std::to_string(target_sdr_db) + " dB");
  }
  return model;
}

}  // namespace sbaec
