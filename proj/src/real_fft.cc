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

#include "real_fft.h"

#include <cassert>
#include <mutex>

#include "sbaec/common.h"

namespace sbaec {
namespace {

// FFTW's planner is not thread-safe; executing distinct plans is.
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft::RealFft(int size) : size_(size) {
  if (size <= 0 || size % 2 != 0) {
    throw ArgumentError("RealFft size must be positive and even, got " + std::to_string(size));
  }
  real_buf_ = fftw_alloc_real(static_cast<std::size_t>(size_));
  complex_buf_ = fftw_alloc_complex(static_cast<std::size_t>(num_bins()));
  std::lock_guard<std::mutex> lock(PlannerMutex());
  forward_plan_ = fftw_plan_dft_r2c_1d(size_, real_buf_, complex_buf_, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(size_, complex_buf_, real_buf_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(forward_plan_);
    fftw_destroy_plan(inverse_plan_);
  }
  fftw_free(real_buf_);
  fftw_free(complex_buf_);
}

void RealFft::Forward(std::span<const double> in, std::span<std::complex<double>> out) {
  assert(static_cast<int>(in.size()) == size_);
  assert(static_cast<int>(out.size()) == num_bins());
  for (int i = 0; i < size_; ++i) real_buf_[i] = in[i];
  fftw_execute(forward_plan_);
  for (int k = 0; k < num_bins(); ++k) {
    out[k] = std::complex<double>(complex_buf_[k][0], complex_buf_[k][1]);
  }
}

void RealFft::Inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  assert(static_cast<int>(in.size()) == num_bins());
  assert(static_cast<int>(out.size()) == size_);
  for (int k = 0; k < num_bins(); ++k) {
    complex_buf_[k][0] = in[k].real();
    complex_buf_[k][1] = in[k].imag();
  }
  fftw_execute(inverse_plan_);
  const double scale = 1.0 / static_cast<double>(size_);
  for (int i = 0; i < size_; ++i) out[i] = real_buf_[i] * scale;
}

}  // namespace sbaec
