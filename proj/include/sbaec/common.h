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

#ifndef SBAEC_COMMON_H_
#define SBAEC_COMMON_H_

#include <cmath>
#include <stdexcept>
#include <string>

namespace sbaec {

// Base class for all sbaec errors. Subclasses distinguish what went wrong so
// callers (the CLI in particular) can map them to exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad function argument or precondition violation.
class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& msg) : Error(msg) {}
};

// Invalid or inconsistent configuration (unknown keys, non-COLA windows, ...).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Mismatched dimensions between containers that must agree.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// File system and format problems.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// A calibration target (SDR, ESR) could not be reached.
class CalibrationError : public Error {
 public:
  explicit CalibrationError(const std::string& msg) : Error(msg) {}
};

inline double PowerToDb(double ratio) { return 10.0 * std::log10(ratio); }
inline double DbToPower(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace sbaec

#endif  // SBAEC_COMMON_H_
