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

#include "sbaec/sbss.h"

#include <cmath>
#include <cstdlib>

#include "sbaec/common.h"
#include "sbaec/nonlinearity.h"

namespace sbaec {

namespace {
constexpr double kScaleFloor = 1e-12;
}

std::vector<std::complex<double>> MultivariateScore(
    std::span<const std::complex<double>> source_bins, double epsilon) {
  double energy = 0.0;
  for (const auto& v : source_bins) energy += std::norm(v);
  const double inv_norm = 1.0 / std::sqrt(energy + epsilon);
  std::vector<std::complex<double>> score(source_bins.size());
  for (std::size_t k = 0; k < source_bins.size(); ++k) score[k] = source_bins[k] * inv_norm;
  return score;
}

SbssCanceller::SbssCanceller(int order, int num_bins, double learning_rate,
                             double score_epsilon)
    : order_(order),
      num_bins_(num_bins),
      learning_rate_(learning_rate),
      score_epsilon_(score_epsilon) {
  if (order < 1) throw ArgumentError("SbssCanceller: order must be >= 1");
  if (num_bins < 1) throw ArgumentError("SbssCanceller: num_bins must be >= 1");
  if (!(learning_rate > 0.0)) throw ArgumentError("SbssCanceller: learning rate must be > 0");
  if (!(score_epsilon > 0.0)) throw ArgumentError("SbssCanceller: score epsilon must be > 0");
  weights_.assign(static_cast<std::size_t>(num_bins) * order, {0.0, 0.0});
}

void SbssCanceller::CheckShapes(
    std::span<const std::complex<double>> mic,
    const std::vector<std::span<const std::complex<double>>>& basis) const {
  if (static_cast<int>(mic.size()) != num_bins_) {
    throw ShapeError("SbssCanceller: mic frame has " + std::to_string(mic.size()) +
                     " bins, state expects " + std::to_string(num_bins_));
  }
  if (static_cast<int>(basis.size()) != order_) {
    throw ShapeError("SbssCanceller: " + std::to_string(basis.size()) +
                     " basis spectra given, state expects " + std::to_string(order_));
  }
  for (const auto& b : basis) {
    if (static_cast<int>(b.size()) != num_bins_) {
      throw ShapeError("SbssCanceller: basis frame bin count mismatch");
    }
  }
}

std::vector<std::complex<double>> SbssCanceller::Demix(
    std::span<const std::complex<double>> mic,
    const std::vector<std::span<const std::complex<double>>>& basis) const {
  CheckShapes(mic, basis);
  std::vector<std::complex<double>> estimate(static_cast<std::size_t>(num_bins_));
  for (int k = 0; k < num_bins_; ++k) {
    std::complex<double> e = mic[static_cast<std::size_t>(k)];
    const std::complex<double>* w = &weights_[static_cast<std::size_t>(k) * order_];
    for (int i = 0; i < order_; ++i) e += w[i] * basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    estimate[static_cast<std::size_t>(k)] = e;
  }
  return estimate;
}

void SbssCanceller::UpdateFrame(std::span<const std::complex<double>> mic,
                                const std::vector<std::span<const std::complex<double>>>& basis,
                                std::span<const std::complex<double>> estimate,
                                EstimateFrame* diagnostics) {
  CheckShapes(mic, basis);
  if (static_cast<int>(estimate.size()) != num_bins_) {
    throw ShapeError("SbssCanceller: estimate frame bin count mismatch");
  }

  // Per-source norms over the whole frame; this is the only cross-bin
  // coupling of the update.
  std::vector<double> inv_norm(static_cast<std::size_t>(order_) + 1);
  {
    double energy = 0.0;
    for (const auto& v : estimate) energy += std::norm(v);
    inv_norm[0] = 1.0 / std::sqrt(energy + score_epsilon_);
    for (int i = 0; i < order_; ++i) {
      energy = 0.0;
      for (const auto& v : basis[static_cast<std::size_t>(i)]) energy += std::norm(v);
      inv_norm[static_cast<std::size_t>(i) + 1] = 1.0 / std::sqrt(energy + score_epsilon_);
    }
  }

  const double eta = learning_rate_;
  int skipped = 0;
  for (int k = 0; k < num_bins_; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const std::complex<double> e0 = estimate[uk];
    std::complex<double>* w = &weights_[uk * order_];

    // Correlation row G_1j = psi_1 conj(e_j) and the scale
    // d = max row sum of |G| = max_a |psi_a| * sum_b |e_b|.
    const double abs_e0 = std::abs(e0);
    double sum_abs = abs_e0;
    double max_psi = abs_e0 * inv_norm[0];
    for (int i = 0; i < order_; ++i) {
      const double a = std::abs(basis[static_cast<std::size_t>(i)][uk]);
      sum_abs += a;
      max_psi = std::max(max_psi, a * inv_norm[static_cast<std::size_t>(i) + 1]);
    }
    const double d = std::max(max_psi * sum_abs, kScaleFloor);

    const std::complex<double> psi1 = e0 * inv_norm[0];
    const double g11 = abs_e0 * abs_e0 * inv_norm[0];  // psi_1 conj(e_1), real

    // Row 1 of W + eta * dW, before scaling: leading entry u0,
    // free entries u_i.
    const double u0 = 1.0 + eta * (1.0 - g11 / d);
    std::vector<std::complex<double>> u(static_cast<std::size_t>(order_));
    double max_entry = 1.0;  // the identity block contributes 1s
    for (int i = 0; i < order_; ++i) {
      const std::complex<double> g1j =
          psi1 * std::conj(basis[static_cast<std::size_t>(i)][uk]);
      u[static_cast<std::size_t>(i)] = w[i] * u0 - (eta / d) * g1j;
      max_entry = std::max(max_entry, std::abs(u[static_cast<std::size_t>(i)]));
    }
    max_entry = std::max(max_entry, std::abs(u0));

    const double c = forced_scale_.value_or(1.0 / std::max(max_entry, kScaleFloor));
    const double scaled_lead = c * u0;
    if (std::abs(scaled_lead) < kScaleFloor) {
      ++skipped;
      if (diagnostics) {
        diagnostics->scale_d[uk] = d;
        diagnostics->scale_c[uk] = c;
      }
      continue;
    }
    // Renormalize row 1 by its leading entry and restore the identity
    // block; both together make the final state independent of c.
    for (int i = 0; i < order_; ++i) w[i] = (c * u[static_cast<std::size_t>(i)]) / scaled_lead;
    if (diagnostics) {
      diagnostics->scale_d[uk] = d;
      diagnostics->scale_c[uk] = c;
    }
  }
  total_skipped_updates_ += skipped;
  if (diagnostics) diagnostics->skipped_updates = skipped;
  ++frames_processed_;
}

EstimateFrame SbssCanceller::ProcessFrame(
    std::span<const std::complex<double>> mic,
    const std::vector<std::span<const std::complex<double>>>& basis) {
  EstimateFrame frame;
  frame.estimate = Demix(mic, basis);
  frame.scale_d.assign(static_cast<std::size_t>(num_bins_), 0.0);
  frame.scale_c.assign(static_cast<std::size_t>(num_bins_), 0.0);
  UpdateFrame(mic, basis, frame.estimate, &frame);
  return frame;
}

std::vector<double> ReferenceGains(double target_energy,
                                   std::span<const double> reference_energies) {
  std::vector<double> gains(reference_energies.size(), 1.0);
  if (!(target_energy > 0.0)) return gains;
  for (std::size_t i = 0; i < reference_energies.size(); ++i) {
    if (reference_energies[i] > 0.0) {
      gains[i] = std::sqrt(target_energy / reference_energies[i]);
    }
  }
  return gains;
}

void SbssCanceller::set_weights(std::span<const std::complex<double>> w) {
  if (w.size() != weights_.size()) {
    throw ShapeError("set_weights: expected " + std::to_string(weights_.size()) +
                     " entries, got " + std::to_string(w.size()));
  }
  weights_.assign(w.begin(), w.end());
}

StreamResult ProcessStream(const TimeSignal& far_end, const TimeSignal& microphone,
                           const SbssParams& params) {
  if (far_end.sample_rate != microphone.sample_rate) {
    throw ArgumentError("ProcessStream: sample rates differ");
  }
  const std::size_t far_len = far_end.size();
  const std::size_t mic_len = microphone.size();
  const std::size_t diff = far_len > mic_len ? far_len - mic_len : mic_len - far_len;
  if (diff > static_cast<std::size_t>(params.stft.fft_size)) {
    throw ArgumentError("ProcessStream: far end and microphone lengths differ by " +
                        std::to_string(diff) + " samples, more than one frame");
  }
  const std::size_t len = std::max(far_len, mic_len);
  TimeSignal x = far_end;
  TimeSignal y = microphone;
  x.samples.resize(len, 0.0);
  y.samples.resize(len, 0.0);

  // Nonlinearity acts on samples, so the expansion happens in the time
  // domain; only then does each basis signal get its own STFT.
  const BasisStack basis = ExpandBasis(x, params.order);
  const Spectrogram mic_spec = Stft(y, params.stft);
  std::vector<Spectrogram> basis_spec;
  basis_spec.reserve(static_cast<std::size_t>(params.order));
  for (const TimeSignal& b : basis.signals) basis_spec.push_back(Stft(b, params.stft));

  if (params.normalize_references) {
    std::vector<double> energies(basis_spec.size());
    for (std::size_t i = 0; i < basis_spec.size(); ++i) {
      energies[i] = SpectrogramEnergy(basis_spec[i]);
    }
    const std::vector<double> gains =
        ReferenceGains(SpectrogramEnergy(mic_spec), energies);
    for (std::size_t i = 0; i < basis_spec.size(); ++i) {
      for (auto& frame : basis_spec[i].frames) {
        for (auto& bin : frame) bin *= gains[i];
      }
    }
  }

  const int num_bins = params.stft.num_bins();
  SbssCanceller canceller(params.order, num_bins, params.learning_rate, params.score_epsilon);

  Spectrogram out;
  out.fft_size = params.stft.fft_size;
  out.hop = params.stft.hop;
  out.frames.resize(mic_spec.num_frames());

  std::vector<std::span<const std::complex<double>>> basis_frames(
      static_cast<std::size_t>(params.order));
  for (std::size_t n = 0; n < mic_spec.num_frames(); ++n) {
    for (int i = 0; i < params.order; ++i) {
      basis_frames[static_cast<std::size_t>(i)] = basis_spec[static_cast<std::size_t>(i)].frames[n];
    }
    EstimateFrame frame = canceller.ProcessFrame(mic_spec.frames[n], basis_frames);
    out.frames[n] = std::move(frame.estimate);
  }

  StreamResult result;
  result.estimate = Istft(out, params.stft, mic_len, microphone.sample_rate);
  result.diagnostics.frames = static_cast<int>(mic_spec.num_frames());
  result.diagnostics.bins = num_bins;
  result.diagnostics.skipped_updates = canceller.total_skipped_updates();
  return result;
}

}  // namespace sbaec
