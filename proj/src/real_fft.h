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

#ifndef SBAEC_REAL_FFT_H_
#define SBAEC_REAL_FFT_H_

#include <complex>
#include <span>

#include <fftw3.h>

namespace sbaec {

// Real-input FFT of a fixed even size, backed by FFTW. Forward is
// unnormalized; Inverse applies the 1/N factor, so Inverse(Forward(x)) == x
// up to rounding. Each instance owns its buffers and plans; instances are
// independent, so concurrent use of distinct instances is safe (FFTW plan
// creation itself is serialized internally).
class RealFft {
 public:
  explicit RealFft(int size);
  ~RealFft();

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return size_; }
  int num_bins() const { return size_ / 2 + 1; }

  // in: size() reals; out: num_bins() one-sided complex bins.
  void Forward(std::span<const double> in, std::span<std::complex<double>> out);
  // in: num_bins() bins; out: size() reals, scaled by 1/size().
  void Inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  int size_;
  double* real_buf_;
  fftw_complex* complex_buf_;
  fftw_plan forward_plan_;
  fftw_plan inverse_plan_;
};

}  // namespace sbaec

#endif  // SBAEC_REAL_FFT_H_
