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

#ifndef SBAEC_SCENARIO_H_
#define SBAEC_SCENARIO_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "sbaec/nonlinearity.h"
#include "sbaec/room.h"
#include "sbaec/sbss.h"
#include "sbaec/time_signal.h"

namespace sbaec {

enum class ScenarioMode {
  kSingleTalk,   // echo only; near end is low-level sensor noise
  kDoubleTalk,   // echo plus an active near-end talker
  kRealCapture,  // recorded far end and microphone; no simulation stage
};

const char* ScenarioModeName(ScenarioMode mode);
ScenarioMode ParseScenarioMode(const std::string& name);

// Where a source signal comes from. Generated sources derive their stream
// seed from the scenario seed, so one seed fixes the whole run.
struct SourceSpec {
  enum class Type { kSpeech, kWhiteNoise, kFile };
  Type type = Type::kSpeech;
  std::string path;      // kFile only
  double noise_rms = 0.05;  // kWhiteNoise only
};

// Loudspeaker distortion, given either directly by threshold or as a target
// distortion ratio to calibrate the threshold against the far-end signal.
struct DistortionSpec {
  NonlinearKind kind = NonlinearKind::kIdentity;
  std::optional<double> x_max;
  std::optional<double> sdr_target_db;
  double rho = 2.0;
};

struct ScenarioConfig {
  ScenarioMode mode = ScenarioMode::kSingleTalk;
  int sample_rate = 16000;
  double duration_s = 10.0;
  std::uint64_t seed = 1;

  SourceSpec far_end;
  SourceSpec near_end{SourceSpec::Type::kWhiteNoise, "", 0.05};
  std::string microphone_file;  // real capture only

  DistortionSpec distortion;
  std::optional<RoomSpec> room;         // exactly one of room / rir_file
  std::optional<std::string> rir_file;  // in the simulated modes
  std::optional<double> esr_target_db;  // absent = leave near end unscaled

  SbssParams canceller;
  bool run_baseline = true;
  double baseline_step = 0.5;
};

// Strict parse: unknown keys anywhere in the document are errors.
ScenarioConfig LoadScenarioConfig(const std::string& path);
ScenarioConfig ParseScenarioJson(const std::string& text);
std::string ScenarioConfigToJson(const ScenarioConfig& config);

// Standalone room description: the scenario's "room" object plus an optional
// "sample_rate" key. Used when generating an impulse response by itself.
RoomSpec LoadRoomSpecJson(const std::string& path);

// Everything a run produced, with enough detail to recompute the headline
// numbers from the emitted artifacts.
struct RunReport {
  std::string mode;
  std::uint64_t seed = 0;
  int sample_rate = 0;
  std::size_t num_samples = 0;
  std::optional<double> calibrated_x_max;
  std::optional<double> achieved_sdr_db;
  std::optional<double> achieved_esr_db;
  int frames_processed = 0;
  std::int64_t skipped_updates = 0;
  // Steady-state metric values in dB, keyed like "erle_sbss" / "terle_fdaf".
  std::map<std::string, double> steady_state_db;
  // Artifact name to path relative to the output directory.
  std::map<std::string, std::string> artifacts;
  double wall_time_s = 0.0;
};

std::string RunReportToJson(const RunReport& report);

// Runs a scenario end to end and writes WAV, CSV and JSON artifacts into
// out_dir (created if missing). With an empty out_dir nothing is written.
RunReport RunScenario(const ScenarioConfig& config, const std::string& out_dir);

}  // namespace sbaec

#endif  // SBAEC_SCENARIO_H_
