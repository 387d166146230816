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

#include "sbaec/baseline.h"

#include <cstdlib>

#include "sbaec/common.h"
#include "sbaec/nonlinearity.h"

namespace sbaec {

FdafCanceller::FdafCanceller(int order, int num_bins, double step, double epsilon)
    : order_(order), num_bins_(num_bins), step_(step), epsilon_(epsilon) {
  if (order < 1) throw ArgumentError("reference order must be at least 1");
  if (num_bins < 1) throw ArgumentError("bin count must be at least 1");
  if (!(step > 0.0)) throw ArgumentError("adaptation step must be positive");
  if (!(epsilon > 0.0)) throw ArgumentError("regularization must be positive");
  weights_.assign(static_cast<std::size_t>(order) * num_bins, {0.0, 0.0});
}

std::vector<std::complex<double>> FdafCanceller::ProcessFrame(
    std::span<const std::complex<double>> mic,
    const std::vector<std::span<const std::complex<double>>>& basis) {
  if (static_cast<int>(mic.size()) != num_bins_)
    throw ShapeError("microphone frame has wrong bin count");
  if (static_cast<int>(basis.size()) != order_)
    throw ShapeError("reference channel count does not match order");
  for (const auto& channel : basis)
    if (static_cast<int>(channel.size()) != num_bins_)
      throw ShapeError("reference frame has wrong bin count");

  std::vector<std::complex<double>> residual(num_bins_);
  for (int k = 0; k < num_bins_; ++k) {
    std::complex<double> echo_model{0.0, 0.0};
    double reference_power = 0.0;
    for (int i = 0; i < order_; ++i) {
      const std::complex<double> x = basis[i][k];
      echo_model += weights_[static_cast<std::size_t>(k) * order_ + i] * x;
      reference_power += std::norm(x);
    }
    const std::complex<double> e = mic[k] - echo_model;
    residual[k] = e;
    const double gain = step_ / (reference_power + epsilon_);
    for (int i = 0; i < order_; ++i) {
      weights_[static_cast<std::size_t>(k) * order_ + i] +=
          gain * e * std::conj(basis[i][k]);
    }
  }
  return residual;
}

TimeSignal FdafCancel(const TimeSignal& far_end, const TimeSignal& microphone,
                      const FdafParams& params) {
  ValidateSignal(far_end, "far end");
  ValidateSignal(microphone, "microphone");
  if (far_end.sample_rate != microphone.sample_rate)
    throw ArgumentError("far end and microphone sample rates differ");
  const std::size_t diff = far_end.samples.size() > microphone.samples.size()
                               ? far_end.samples.size() - microphone.samples.size()
                               : microphone.samples.size() - far_end.samples.size();
  if (diff > static_cast<std::size_t>(params.stft.fft_size))
    throw ArgumentError("far end and microphone lengths differ by more than one frame");
  ValidateStftConfig(params.stft);

  const BasisStack stack = ExpandBasis(far_end, params.order);
  std::vector<Spectrogram> basis_specs;
  basis_specs.reserve(stack.signals.size());
  for (const auto& channel : stack.signals)
    basis_specs.push_back(Stft(channel, params.stft));
  const Spectrogram mic_spec = Stft(microphone, params.stft);

  const int num_frames = static_cast<int>(mic_spec.frames.size());
  FdafCanceller canceller(params.order, params.stft.num_bins(), params.step,
                          params.epsilon);
  Spectrogram out;
  out.fft_size = params.stft.fft_size;
  out.hop = params.stft.hop;
  out.frames.reserve(num_frames);
  std::vector<std::span<const std::complex<double>>> basis_frame(params.order);
  const std::vector<std::complex<double>> zeros(
      static_cast<std::size_t>(params.stft.num_bins()), std::complex<double>{});
  for (int n = 0; n < num_frames; ++n) {
    for (int i = 0; i < params.order; ++i) {
      const auto& frames = basis_specs[i].frames;
      // The far end can be one frame shorter than the microphone capture.
      basis_frame[i] = n < static_cast<int>(frames.size())
                           ? std::span<const std::complex<double>>(frames[n])
                           : std::span<const std::complex<double>>(zeros);
    }
    out.frames.push_back(canceller.ProcessFrame(mic_spec.frames[n], basis_frame));
  }
  return Istft(out, params.stft, microphone.samples.size(), microphone.sample_rate);
}

}  // namespace sbaec
