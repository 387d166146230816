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

#ifndef SBAEC_BASELINE_H_
#define SBAEC_BASELINE_H_

#include <complex>
#include <span>
#include <vector>

#include "sbaec/stft.h"
#include "sbaec/time_signal.h"

namespace sbaec {

// Frequency-domain adaptive canceller used as a comparison point: per-bin
// normalized LMS over the same odd-power reference channels. It models the
// echo path directly instead of demixing, so double talk perturbs it.
class FdafCanceller {
 public:
  FdafCanceller(int order, int num_bins, double step, double epsilon = 1e-12);

  // One frame: subtracts the current echo model, then updates it from the
  // residual. Inputs follow the same layout as the demixing canceller.
  std::vector<std::complex<double>> ProcessFrame(
      std::span<const std::complex<double>> mic,
      const std::vector<std::span<const std::complex<double>>>& basis);

  int order() const { return order_; }
  int num_bins() const { return num_bins_; }
  std::span<const std::complex<double>> weights() const { return weights_; }

 private:
  int order_;
  int num_bins_;
  double step_;
  double epsilon_;
  std::vector<std::complex<double>> weights_;  // [bin * order + channel]
};

struct FdafParams {
  int order = 3;
  double step = 0.5;
  double epsilon = 1e-12;
  StftConfig stft;
};

// End-to-end run over time signals, mirroring the demixing stream API.
TimeSignal FdafCancel(const TimeSignal& far_end, const TimeSignal& microphone,
                      const FdafParams& params);

}  // namespace sbaec

#endif  // SBAEC_BASELINE_H_
