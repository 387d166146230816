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

#include "sbaec/scenario.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>

#include "json.hpp"
#include "sbaec/baseline.h"
#include "sbaec/common.h"
#include "sbaec/metrics.h"
#include "sbaec/signal_gen.h"
#include "sbaec/wav_io.h"

namespace sbaec {
namespace {

using nlohmann::json;

constexpr std::uint32_t kRoleFarEnd = 1;
constexpr std::uint32_t kRoleNearEnd = 2;

void CheckKeys(const json& j, const char* context,
               std::initializer_list<const char*> allowed) {
  if (!j.is_object())
    throw ConfigError(std::string(context) + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError(std::string("unknown key \"") + item.key() + "\" in " + context);
  }
}

std::array<double, 3> ParseVec3(const json& j, const char* context) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError(std::string(context) + " must be an array of 3 numbers");
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) out[i] = j[i].get<double>();
  return out;
}

std::uint64_t ParseSeed(const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v < 0) throw ConfigError("seed must be non-negative");
    return static_cast<std::uint64_t>(v);
  }
  throw ConfigError("seed must be an integer");
}

SourceSpec::Type ParseSourceType(const std::string& name) {
  if (name == "speech") return SourceSpec::Type::kSpeech;
  if (name == "white_noise") return SourceSpec::Type::kWhiteNoise;
  if (name == "file") return SourceSpec::Type::kFile;
  throw ConfigError("unknown source type \"" + name +
                    "\" (expected speech, white_noise or file)");
}

const char* SourceTypeName(SourceSpec::Type type) {
  switch (type) {
    case SourceSpec::Type::kSpeech: return "speech";
    case SourceSpec::Type::kWhiteNoise: return "white_noise";
    case SourceSpec::Type::kFile: return "file";
  }
  throw ArgumentError("invalid source type");
}

SourceSpec ParseSource(const json& j, const char* context) {
  CheckKeys(j, context, {"type", "path", "noise_rms"});
  SourceSpec spec;
  spec.type = ParseSourceType(j.at("type").get<std::string>());
  if (j.contains("path")) spec.path = j.at("path").get<std::string>();
  if (j.contains("noise_rms")) spec.noise_rms = j.at("noise_rms").get<double>();
  if (spec.type == SourceSpec::Type::kFile && spec.path.empty())
    throw ConfigError(std::string(context) + ": file source needs a path");
  if (spec.type != SourceSpec::Type::kFile && !spec.path.empty())
    throw ConfigError(std::string(context) + ": path is only valid for file sources");
  return spec;
}

json SourceToJson(const SourceSpec& spec) {
  json j;
  j["type"] = SourceTypeName(spec.type);
  if (spec.type == SourceSpec::Type::kFile) j["path"] = spec.path;
  if (spec.type == SourceSpec::Type::kWhiteNoise) j["noise_rms"] = spec.noise_rms;
  return j;
}

DistortionSpec ParseDistortion(const json& j) {
  CheckKeys(j, "nonlinearity", {"kind", "x_max", "sdr_target", "rho"});
  DistortionSpec spec;
  spec.kind = ParseNonlinearKind(j.at("kind").get<std::string>());
  if (j.contains("x_max")) spec.x_max = j.at("x_max").get<double>();
  if (j.contains("sdr_target")) spec.sdr_target_db = j.at("sdr_target").get<double>();
  if (j.contains("rho")) spec.rho = j.at("rho").get<double>();
  return spec;
}

json DistortionToJson(const DistortionSpec& spec) {
  json j;
  j["kind"] = NonlinearKindName(spec.kind);
  if (spec.x_max) j["x_max"] = *spec.x_max;
  if (spec.sdr_target_db) j["sdr_target"] = *spec.sdr_target_db;
  if (spec.kind == NonlinearKind::kSoftSaturation) j["rho"] = spec.rho;
  return j;
}

RoomSpec ParseRoomFields(const json& j) {
  RoomSpec spec;
  if (j.contains("dimensions")) spec.dimensions = ParseVec3(j.at("dimensions"), "room.dimensions");
  if (j.contains("source")) spec.source = ParseVec3(j.at("source"), "room.source");
  if (j.contains("microphone")) spec.mic = ParseVec3(j.at("microphone"), "room.microphone");
  if (j.contains("t60_s")) spec.t60_s = j.at("t60_s").get<double>();
  if (j.contains("rir_length")) spec.rir_length = j.at("rir_length").get<int>();
  if (j.contains("sound_speed")) spec.sound_speed = j.at("sound_speed").get<double>();
  return spec;
}

RoomSpec ParseRoom(const json& j) {
  CheckKeys(j, "room",
            {"dimensions", "source", "microphone", "t60_s", "rir_length", "sound_speed"});
  return ParseRoomFields(j);
}

json RoomToJson(const RoomSpec& spec) {
  json j;
  j["dimensions"] = spec.dimensions;
  j["source"] = spec.source;
  j["microphone"] = spec.mic;
  j["t60_s"] = spec.t60_s;
  j["rir_length"] = spec.rir_length;
  j["sound_speed"] = spec.sound_speed;
  return j;
}

StftConfig ParseStft(const json& j) {
  CheckKeys(j, "stft", {"fft_size", "hop", "window"});
  StftConfig cfg;
  if (j.contains("fft_size")) cfg.fft_size = j.at("fft_size").get<int>();
  if (j.contains("hop")) cfg.hop = j.at("hop").get<int>();
  if (j.contains("window")) cfg.window = ParseWindowType(j.at("window").get<std::string>());
  return cfg;
}

json StftToJson(const StftConfig& cfg) {
  json j;
  j["fft_size"] = cfg.fft_size;
  j["hop"] = cfg.hop;
  j["window"] = WindowTypeName(cfg.window);
  return j;
}

void ValidateScenarioConfig(const ScenarioConfig& config) {
  if (config.sample_rate <= 0) throw ConfigError("sample_rate must be positive");
  if (!(config.duration_s > 0.0)) throw ConfigError("duration_s must be positive");
  if (config.canceller.order < 1) throw ConfigError("order must be at least 1");
  if (!(config.canceller.learning_rate > 0.0))
    throw ConfigError("learning_rate must be positive");
  if (!(config.baseline_step > 0.0)) throw ConfigError("baseline_step must be positive");
  ValidateStftConfig(config.canceller.stft);

  const bool simulated = config.mode != ScenarioMode::kRealCapture;
  if (simulated) {
    if (config.room.has_value() == config.rir_file.has_value())
      throw ConfigError("simulated modes need exactly one of room or rir_file");
    if (!config.microphone_file.empty())
      throw ConfigError("microphone_file is only valid in real_capture mode");
  } else {
    if (config.room || config.rir_file || config.esr_target_db)
      throw ConfigError("room, rir_file and esr_target are not used in real_capture mode");
    if (config.distortion.kind != NonlinearKind::kIdentity)
      throw ConfigError("nonlinearity is not used in real_capture mode");
    if (config.far_end.type != SourceSpec::Type::kFile)
      throw ConfigError("real_capture mode needs a file far end");
    if (config.microphone_file.empty())
      throw ConfigError("real_capture mode needs microphone_file");
  }

  const DistortionSpec& d = config.distortion;
  if (d.kind == NonlinearKind::kIdentity) {
    if (d.x_max || d.sdr_target_db)
      throw ConfigError("identity nonlinearity takes neither x_max nor sdr_target");
  } else {
    if (d.x_max.has_value() == d.sdr_target_db.has_value())
      throw ConfigError("nonlinearity needs exactly one of x_max or sdr_target");
    if (d.x_max && !(*d.x_max > 0.0)) throw ConfigError("nonlinearity x_max must be positive");
    if (!(d.rho > 0.0)) throw ConfigError("nonlinearity rho must be positive");
  }
}

TimeSignal MakeSource(const SourceSpec& spec, const ScenarioConfig& config,
                      std::uint32_t role) {
  switch (spec.type) {
    case SourceSpec::Type::kSpeech:
      return GenerateSpeechLike(config.duration_s, config.sample_rate,
                                DeriveSeed(config.seed, role));
    case SourceSpec::Type::kWhiteNoise:
      return GenerateWhiteNoise(config.duration_s, config.sample_rate,
                                DeriveSeed(config.seed, role), spec.noise_rms);
    case SourceSpec::Type::kFile: {
      TimeSignal signal = ReadWav(spec.path);
      if (signal.sample_rate != config.sample_rate)
        throw ConfigError(spec.path + ": sample rate " +
                          std::to_string(signal.sample_rate) +
                          " does not match configured " +
                          std::to_string(config.sample_rate));
      return signal;
    }
  }
  throw ArgumentError("invalid source type");
}

void EmitWav(RunReport& report, const std::string& out_dir, const std::string& name,
             const TimeSignal& signal) {
  const std::string file = name + ".wav";
  report.artifacts[name] = file;
  if (!out_dir.empty())
    WriteWav((std::filesystem::path(out_dir) / file).string(), signal);
}

void EmitCsv(RunReport& report, const std::string& out_dir, const std::string& name,
             const MetricSeries& series) {
  const std::string file = name + ".csv";
  report.artifacts[name] = file;
  if (!out_dir.empty())
    WriteMetricCsv((std::filesystem::path(out_dir) / file).string(), series);
}

void EmitText(RunReport& report, const std::string& out_dir, const std::string& name,
              const std::string& file, const std::string& text) {
  report.artifacts[name] = file;
  if (out_dir.empty()) return;
  const auto path = std::filesystem::path(out_dir) / file;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

}  // namespace

const char* ScenarioModeName(ScenarioMode mode) {
  switch (mode) {
    case ScenarioMode::kSingleTalk: return "single_talk";
    case ScenarioMode::kDoubleTalk: return "double_talk";
    case ScenarioMode::kRealCapture: return "real_capture";
  }
  throw ArgumentError("invalid scenario mode");
}

ScenarioMode ParseScenarioMode(const std::string& name) {
  if (name == "single_talk") return ScenarioMode::kSingleTalk;
  if (name == "double_talk") return ScenarioMode::kDoubleTalk;
  if (name == "real_capture") return ScenarioMode::kRealCapture;
  throw ConfigError("unknown scenario mode \"" + name +
                    "\" (expected single_talk, double_talk or real_capture)");
}

ScenarioConfig ParseScenarioJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  try {
    CheckKeys(j, "scenario",
              {"mode", "sample_rate", "duration_s", "seed", "far_end", "near_end",
               "microphone_file", "nonlinearity", "room", "rir_file", "esr_target",
               "stft", "order", "learning_rate", "score_epsilon", "normalize_references",
               "run_baseline", "baseline_step"});
    ScenarioConfig config;
    if (j.contains("mode")) config.mode = ParseScenarioMode(j.at("mode").get<std::string>());
    if (j.contains("sample_rate")) config.sample_rate = j.at("sample_rate").get<int>();
    if (j.contains("duration_s")) config.duration_s = j.at("duration_s").get<double>();
    if (j.contains("seed")) config.seed = ParseSeed(j.at("seed"));
    if (j.contains("far_end")) config.far_end = ParseSource(j.at("far_end"), "far_end");
    if (j.contains("near_end")) {
      config.near_end = ParseSource(j.at("near_end"), "near_end");
    } else if (config.mode == ScenarioMode::kDoubleTalk) {
      // Double talk means an active talker; low-level noise is the
      // single-talk default.
      config.near_end = SourceSpec{SourceSpec::Type::kSpeech, "", 0.05};
    }
    if (j.contains("microphone_file"))
      config.microphone_file = j.at("microphone_file").get<std::string>();
    if (j.contains("nonlinearity")) config.distortion = ParseDistortion(j.at("nonlinearity"));
    if (j.contains("room")) config.room = ParseRoom(j.at("room"));
    if (j.contains("rir_file")) config.rir_file = j.at("rir_file").get<std::string>();
    if (j.contains("esr_target")) {
      const json& esr = j.at("esr_target");
      if (esr.is_string()) {
        if (esr.get<std::string>() != "none")
          throw ConfigError("esr_target must be a number or \"none\"");
      } else {
        config.esr_target_db = esr.get<double>();
      }
    }
    if (j.contains("stft")) config.canceller.stft = ParseStft(j.at("stft"));
    if (j.contains("order")) config.canceller.order = j.at("order").get<int>();
    if (j.contains("learning_rate"))
      config.canceller.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("score_epsilon"))
      config.canceller.score_epsilon = j.at("score_epsilon").get<double>();
    if (j.contains("normalize_references"))
      config.canceller.normalize_references = j.at("normalize_references").get<bool>();
    if (j.contains("run_baseline")) config.run_baseline = j.at("run_baseline").get<bool>();
    if (j.contains("baseline_step")) config.baseline_step = j.at("baseline_step").get<double>();
    if (config.room) config.room->sample_rate = config.sample_rate;
    ValidateScenarioConfig(config);
    return config;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid scenario config: ") + e.what());
  }
}

ScenarioConfig LoadScenarioConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return ParseScenarioJson(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

RoomSpec LoadRoomSpecJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open room spec " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    const json j = json::parse(text);
    CheckKeys(j, "room",
              {"dimensions", "source", "microphone", "t60_s", "rir_length", "sound_speed",
               "sample_rate"});
    RoomSpec spec = ParseRoomFields(j);
    if (j.contains("sample_rate")) spec.sample_rate = j.at("sample_rate").get<int>();
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": invalid room spec: " + e.what());
  }
}

std::string ScenarioConfigToJson(const ScenarioConfig& config) {
  json j;
  j["mode"] = ScenarioModeName(config.mode);
  j["sample_rate"] = config.sample_rate;
  j["duration_s"] = config.duration_s;
  j["seed"] = config.seed;
  j["far_end"] = SourceToJson(config.far_end);
  if (config.mode == ScenarioMode::kRealCapture) {
    j["microphone_file"] = config.microphone_file;
  } else {
    j["near_end"] = SourceToJson(config.near_end);
    j["nonlinearity"] = DistortionToJson(config.distortion);
    if (config.room) j["room"] = RoomToJson(*config.room);
    if (config.rir_file) j["rir_file"] = *config.rir_file;
    if (config.esr_target_db) j["esr_target"] = *config.esr_target_db;
  }
  j["stft"] = StftToJson(config.canceller.stft);
  j["order"] = config.canceller.order;
  j["learning_rate"] = config.canceller.learning_rate;
  j["score_epsilon"] = config.canceller.score_epsilon;
  j["normalize_references"] = config.canceller.normalize_references;
  j["run_baseline"] = config.run_baseline;
  j["baseline_step"] = config.baseline_step;
  return j.dump(2) + "\n";
}

std::string RunReportToJson(const RunReport& report) {
  json j;
  j["mode"] = report.mode;
  j["seed"] = report.seed;
  j["sample_rate"] = report.sample_rate;
  j["num_samples"] = report.num_samples;
  if (report.calibrated_x_max) j["calibrated_x_max"] = *report.calibrated_x_max;
  if (report.achieved_sdr_db) j["achieved_sdr_db"] = *report.achieved_sdr_db;
  if (report.achieved_esr_db) j["achieved_esr_db"] = *report.achieved_esr_db;
  j["frames_processed"] = report.frames_processed;
  j["skipped_updates"] = report.skipped_updates;
  j["steady_state_db"] = report.steady_state_db;
  j["artifacts"] = report.artifacts;
  j["wall_time_s"] = report.wall_time_s;
  return j.dump(2) + "\n";
}

RunReport RunScenario(const ScenarioConfig& config, const std::string& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  ValidateScenarioConfig(config);
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  RunReport report;
  report.mode = ScenarioModeName(config.mode);
  report.seed = config.seed;
  report.sample_rate = config.sample_rate;

  TimeSignal far_end = MakeSource(config.far_end, config, kRoleFarEnd);
  const MetricWindow metric_window{config.sample_rate, config.sample_rate / 4};

  if (config.mode == ScenarioMode::kRealCapture) {
    const TimeSignal microphone = ReadWav(config.microphone_file);
    if (microphone.sample_rate != config.sample_rate)
      throw ConfigError(config.microphone_file + ": sample rate does not match config");
    // The capture defines the timeline; align the reference to it.
    far_end.samples.resize(microphone.samples.size(), 0.0);
    report.num_samples = microphone.samples.size();

    const StreamResult result = ProcessStream(far_end, microphone, config.canceller);
    report.frames_processed = result.diagnostics.frames;
    report.skipped_updates = result.diagnostics.skipped_updates;
    EmitWav(report, out_dir, "estimate_sbss", result.estimate);
    const MetricSeries erle = Erle(microphone, result.estimate, metric_window);
    report.steady_state_db["erle_sbss"] = erle.steady_state_db;
    EmitCsv(report, out_dir, "erle_sbss", erle);

    if (config.run_baseline) {
      FdafParams baseline{config.canceller.order, config.baseline_step, 1e-12,
                          config.canceller.stft};
      const TimeSignal estimate = FdafCancel(far_end, microphone, baseline);
      EmitWav(report, out_dir, "estimate_fdaf", estimate);
      const MetricSeries erle_fdaf = Erle(microphone, estimate, metric_window);
      report.steady_state_db["erle_fdaf"] = erle_fdaf.steady_state_db;
      EmitCsv(report, out_dir, "erle_fdaf", erle_fdaf);
    }
  } else {
    NonlinearModel model = NonlinearModel::Identity();
    const DistortionSpec& d = config.distortion;
    if (d.kind != NonlinearKind::kIdentity) {
      if (d.x_max) {
        model = d.kind == NonlinearKind::kHardClip
                    ? NonlinearModel::HardClip(*d.x_max)
                    : NonlinearModel::SoftSaturation(*d.x_max, d.rho);
      } else {
        model = CalibrateSdr(far_end, d.kind, *d.sdr_target_db, d.rho);
        report.calibrated_x_max = model.x_max;
      }
      const double sdr = MeasureSdr(far_end, model);
      if (std::isfinite(sdr)) report.achieved_sdr_db = sdr;
    }

    TimeSignal rir;
    if (config.room) {
      RoomSpec room = *config.room;
      room.sample_rate = config.sample_rate;
      rir = GenerateRir(room);
    } else {
      rir = ReadWav(*config.rir_file);
      if (rir.sample_rate != config.sample_rate)
        throw ConfigError(*config.rir_file + ": sample rate does not match config");
    }

    const TimeSignal near_end = MakeSource(config.near_end, config, kRoleNearEnd);
    const MixtureScenario mix =
        SynthesizeMixture(far_end, near_end, model, rir, config.esr_target_db);
    report.num_samples = mix.microphone.samples.size();
    if (SignalPower(mix.echo) > 0.0 && SignalPower(mix.near_end_scaled) > 0.0)
      report.achieved_esr_db = MeasureEsr(mix.echo, mix.near_end_scaled);

    EmitWav(report, out_dir, "far_end", mix.far_end);
    EmitWav(report, out_dir, "echo", mix.echo);
    EmitWav(report, out_dir, "near_end", mix.near_end_scaled);
    EmitWav(report, out_dir, "microphone", mix.microphone);
    EmitWav(report, out_dir, "rir", rir);

    const StreamResult result = ProcessStream(mix.far_end, mix.microphone, config.canceller);
    report.frames_processed = result.diagnostics.frames;
    report.skipped_updates = result.diagnostics.skipped_updates;
    EmitWav(report, out_dir, "estimate_sbss", result.estimate);

    const MetricSeries erle = Erle(mix.microphone, result.estimate, metric_window);
    const MetricSeries terle =
        Terle(mix.echo, result.estimate, mix.near_end_scaled, metric_window);
    report.steady_state_db["erle_sbss"] = erle.steady_state_db;
    report.steady_state_db["terle_sbss"] = terle.steady_state_db;
    EmitCsv(report, out_dir, "erle_sbss", erle);
    EmitCsv(report, out_dir, "terle_sbss", terle);

    if (config.run_baseline) {
      FdafParams baseline{config.canceller.order, config.baseline_step, 1e-12,
                          config.canceller.stft};
      const TimeSignal estimate = FdafCancel(mix.far_end, mix.microphone, baseline);
      EmitWav(report, out_dir, "estimate_fdaf", estimate);
      const MetricSeries erle_fdaf = Erle(mix.microphone, estimate, metric_window);
      const MetricSeries terle_fdaf =
          Terle(mix.echo, estimate, mix.near_end_scaled, metric_window);
      report.steady_state_db["erle_fdaf"] = erle_fdaf.steady_state_db;
      report.steady_state_db["terle_fdaf"] = terle_fdaf.steady_state_db;
      EmitCsv(report, out_dir, "erle_fdaf", erle_fdaf);
      EmitCsv(report, out_dir, "terle_fdaf", terle_fdaf);
    }
  }

  EmitText(report, out_dir, "config", "config.json", ScenarioConfigToJson(config));
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EmitText(report, out_dir, "report", "report.json", RunReportToJson(report));
  return report;
}

}  // namespace sbaec
