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

#ifndef SBAEC_SBSS_H_
#define SBAEC_SBSS_H_

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sbaec/stft.h"
#include "sbaec/time_signal.h"

namespace sbaec {

// Output of one processed frame: the recovered near-end spectrum plus the
// per-bin update scalars, kept for diagnostics.
struct EstimateFrame {
  std::vector<std::complex<double>> estimate;  // E(k), one per bin
  std::vector<double> scale_d;                 // d(k) used by the update
  std::vector<double> scale_c;                 // c(k) used by the update
  int skipped_updates = 0;
};

// Multivariate score of one source: psi(k) = e(k) / sqrt(sum_k' |e(k')|^2 + eps).
// The norm couples all bins of the source, so the full frame is required.
std::vector<std::complex<double>> MultivariateScore(
    std::span<const std::complex<double>> source_bins, double epsilon);

// Online semi-blind separation of the near end from a microphone spectrum,
// given the spectra of the odd-power basis signals of the far end as known
// references. State per bin is the demixing matrix
//
//   W(k) = [ 1  w(k)^T ]
//          [ 0   I_p   ]
//
// stored as the free vector w(k) of length p; the fixed entries are implied.
// Each frame runs demix with the current weights, then a constrained scaled
// natural-gradient step: the raw update is row-masked to the first row,
// scaled, renormalized by its leading entry, and the identity block restored,
// so the returned state is again exactly of the form above.
class SbssCanceller {
 public:
  SbssCanceller(int order, int num_bins, double learning_rate, double score_epsilon = 1e-12);

  int order() const { return order_; }
  int num_bins() const { return num_bins_; }
  double learning_rate() const { return learning_rate_; }

  // E(k) = Y(k) + sum_i w_i(k) X_i(k). Does not change state.
  std::vector<std::complex<double>> Demix(
      std::span<const std::complex<double>> mic,
      const std::vector<std::span<const std::complex<double>>>& basis) const;

  // Natural-gradient step for one frame, given the estimate that Demix
  // produced from the same observation with the current weights.
  void UpdateFrame(std::span<const std::complex<double>> mic,
                   const std::vector<std::span<const std::complex<double>>>& basis,
                   std::span<const std::complex<double>> estimate,
                   EstimateFrame* diagnostics = nullptr);

  // Demix then update; returns the pre-update estimate.
  EstimateFrame ProcessFrame(std::span<const std::complex<double>> mic,
                             const std::vector<std::span<const std::complex<double>>>& basis);

  // w(k) flattened as [bin * order + i].
  std::span<const std::complex<double>> weights() const { return weights_; }
  void set_weights(std::span<const std::complex<double>> w);

  // Pins the intermediate scale c(k,n) to a fixed value instead of the
  // computed one. The final state is provably independent of it; this knob
  // exists so tests can assert exactly that.
  void set_forced_scale(std::optional<double> c) { forced_scale_ = c; }

  std::int64_t total_skipped_updates() const { return total_skipped_updates_; }
  int frames_processed() const { return frames_processed_; }

 private:
  void CheckShapes(std::span<const std::complex<double>> mic,
                   const std::vector<std::span<const std::complex<double>>>& basis) const;

  int order_;
  int num_bins_;
  double learning_rate_;
  double score_epsilon_;
  std::optional<double> forced_scale_;
  std::vector<std::complex<double>> weights_;  // num_bins * order
  std::int64_t total_skipped_updates_ = 0;
  int frames_processed_ = 0;
};

struct SbssParams {
  int order = 3;
  double learning_rate = 0.1;
  double score_epsilon = 1e-12;
  // Scale each reference channel so its spectrogram energy matches the
  // microphone's before adaptation. The demixing model is invariant under
  // per-channel reference scaling (w_i absorbs the factor), but the update's
  // effective step size is not: it grows with the reference-to-estimate norm
  // ratio, and references that are much louder than the echo they explain
  // push the step past the stable range. Equalizing the energies keeps
  // convergence independent of absolute playback and capture levels.
  bool normalize_references = true;
  StftConfig stft;
};

// Per-channel gains g_i = sqrt(target_energy / reference_energy_i) that give
// every reference the energy of the target. Channels with zero energy, or a
// zero-energy target, get gain 1.
std::vector<double> ReferenceGains(double target_energy,
                                   std::span<const double> reference_energies);

struct StreamDiagnostics {
  int frames = 0;
  int bins = 0;
  std::int64_t skipped_updates = 0;
};

struct StreamResult {
  TimeSignal estimate;
  StreamDiagnostics diagnostics;
};

// End-to-end time-domain run: expand the far end into odd-power basis
// signals, transform everything, separate frame by frame, resynthesize.
// Throws ArgumentError when the inputs differ by more than one frame.
StreamResult ProcessStream(const TimeSignal& far_end, const TimeSignal& microphone,
                           const SbssParams& params);

}  // namespace sbaec

#endif  // SBAEC_SBSS_H_
