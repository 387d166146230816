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

#include "sbaec/time_signal.h"

#include <cmath>
#include <string>

namespace sbaec {

void ValidateSignal(const TimeSignal& signal, const char* what) {
  if (signal.sample_rate <= 0) {
    throw ArgumentError(std::string(what) + ": sample_rate must be positive, got " +
                        std::to_string(signal.sample_rate));
  }
  for (std::size_t i = 0; i < signal.samples.size(); ++i) {
    if (!std::isfinite(signal.samples[i])) {
      throw ArgumentError(std::string(what) + ": non-finite sample at index " +
                          std::to_string(i));
    }
  }
}

}  // namespace sbaec
