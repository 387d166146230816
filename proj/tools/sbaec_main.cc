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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbaec/common.h"
#include "sbaec/metrics.h"
#include "sbaec/nonlinearity.h"
#include "sbaec/room.h"
#include "sbaec/sbss.h"
#include "sbaec/scenario.h"
#include "sbaec/wav_io.h"

namespace {

void PrintSteadyState(const std::string& name, const sbaec::MetricSeries& series) {
  std::cout << name << " steady state: " << series.steady_state_db << " dB ("
            << series.values_db.size() << " points)\n";
}

void RunSimulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed) {
  sbaec::ScenarioConfig config = sbaec::LoadScenarioConfig(config_path);
  if (seed) config.seed = *seed;
  const sbaec::RunReport report = sbaec::RunScenario(config, out_dir);
  std::cout << "mode: " << report.mode << "\n"
            << "samples: " << report.num_samples << " @ " << report.sample_rate << " Hz\n"
            << "frames: " << report.frames_processed
            << " (skipped bin updates: " << report.skipped_updates << ")\n";
  if (report.calibrated_x_max)
    std::cout << "calibrated x_max: " << *report.calibrated_x_max << "\n";
  if (report.achieved_sdr_db)
    std::cout << "achieved sdr: " << *report.achieved_sdr_db << " dB\n";
  if (report.achieved_esr_db)
    std::cout << "achieved esr: " << *report.achieved_esr_db << " dB\n";
  for (const auto& [name, value] : report.steady_state_db)
    std::cout << name << ": " << value << " dB\n";
  if (!out_dir.empty())
    std::cout << "report: " << out_dir << "/" << report.artifacts.at("report") << "\n";
}

void RunCancel(const std::string& far_path, const std::string& mic_path,
               const std::string& out_path, const sbaec::SbssParams& params,
               const std::string& csv_path) {
  const sbaec::TimeSignal far_end = sbaec::ReadWav(far_path);
  const sbaec::TimeSignal microphone = sbaec::ReadWav(mic_path);
  const sbaec::StreamResult result = sbaec::ProcessStream(far_end, microphone, params);
  sbaec::WriteWav(out_path, result.estimate);
  const sbaec::MetricWindow window{microphone.sample_rate, microphone.sample_rate / 4};
  const sbaec::MetricSeries erle = sbaec::Erle(microphone, result.estimate, window);
  PrintSteadyState("erle", erle);
  if (!csv_path.empty()) sbaec::WriteMetricCsv(csv_path, erle);
  std::cout << "frames: " << result.diagnostics.frames
            << " (skipped bin updates: " << result.diagnostics.skipped_updates << ")\n"
            << "estimate: " << out_path << "\n";
}

void RunMetrics(const std::string& mode, const std::vector<std::string>& wavs,
                const std::string& csv_path, double window_s, double hop_s) {
  sbaec::MetricSeries series;
  if (mode == "erle") {
    if (wavs.size() != 2)
      throw sbaec::ArgumentError("metrics --mode erle needs <microphone.wav> <estimate.wav>");
    const sbaec::TimeSignal microphone = sbaec::ReadWav(wavs[0]);
    const sbaec::TimeSignal estimate = sbaec::ReadWav(wavs[1]);
    const sbaec::MetricWindow window{
        static_cast<int>(window_s * microphone.sample_rate),
        static_cast<int>(hop_s * microphone.sample_rate)};
    series = sbaec::Erle(microphone, estimate, window);
  } else if (mode == "terle") {
    if (wavs.size() != 3)
      throw sbaec::ArgumentError(
          "metrics --mode terle needs <echo.wav> <estimate.wav> <near_end.wav>");
    const sbaec::TimeSignal echo = sbaec::ReadWav(wavs[0]);
    const sbaec::TimeSignal estimate = sbaec::ReadWav(wavs[1]);
    const sbaec::TimeSignal near_end = sbaec::ReadWav(wavs[2]);
    const sbaec::MetricWindow window{static_cast<int>(window_s * echo.sample_rate),
                                     static_cast<int>(hop_s * echo.sample_rate)};
    series = sbaec::Terle(echo, estimate, near_end, window);
  } else {
    throw sbaec::ArgumentError("unknown metrics mode \"" + mode +
                               "\" (expected erle or terle)");
  }
  PrintSteadyState(mode, series);
  if (!csv_path.empty()) {
    sbaec::WriteMetricCsv(csv_path, series);
    std::cout << "csv: " << csv_path << "\n";
  }
}

void RunCalibrate(const std::string& in_path, const std::string& kind_name, double target_db,
                  double rho, const std::string& out_path) {
  const sbaec::TimeSignal x = sbaec::ReadWav(in_path);
  const sbaec::NonlinearKind kind = sbaec::ParseNonlinearKind(kind_name);
  const sbaec::NonlinearModel model = sbaec::CalibrateSdr(x, kind, target_db, rho);
  std::cout << "kind: " << sbaec::NonlinearKindName(model.kind) << "\n"
            << "x_max: " << model.x_max << "\n"
            << "achieved sdr: " << sbaec::MeasureSdr(x, model) << " dB\n";
  if (!out_path.empty()) {
    sbaec::WriteWav(out_path, sbaec::ApplyNonlinearity(model, x));
    std::cout << "distorted: " << out_path << "\n";
  }
}

void RunRir(const std::string& config_path, const std::string& out_path) {
  const sbaec::RoomSpec spec =
      config_path.empty() ? sbaec::RoomSpec{} : sbaec::LoadRoomSpecJson(config_path);
  const sbaec::TimeSignal rir = sbaec::GenerateRir(spec);
  sbaec::WriteWav(out_path, rir);
  std::cout << "reflection coefficient: " << sbaec::ReflectionCoefficient(spec) << "\n"
            << "taps: " << rir.size() << " @ " << rir.sample_rate << " Hz\n"
            << "rir: " << out_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-blind nonlinear acoustic echo cancellation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;
  CLI::App* simulate = app.add_subcommand("simulate", "Run a full scenario from a config file");
  simulate->add_option("config", config_path, "Scenario config (JSON)")->required();
  simulate->add_option("--out", out_dir, "Output directory for WAV/CSV/report artifacts");
  simulate->add_option("--seed", seed_override, "Override the config seed");

  std::string far_path;
  std::string mic_path;
  std::string cancel_out;
  std::string cancel_csv;
  sbaec::SbssParams params;
  std::string window_name = "sqrt_hann";
  CLI::App* cancel = app.add_subcommand("cancel", "Cancel echo in a WAV pair");
  cancel->add_option("--farend", far_path, "Far-end (reference) WAV")->required();
  cancel->add_option("--mic", mic_path, "Microphone WAV")->required();
  cancel->add_option("--out", cancel_out, "Near-end estimate WAV")->required();
  cancel->add_option("--p", params.order, "Odd-power expansion order");
  cancel->add_option("--eta", params.learning_rate, "Adaptation learning rate");
  cancel->add_option("--fft", params.stft.fft_size, "FFT size in samples");
  cancel->add_option("--hop", params.stft.hop, "Hop size in samples");
  cancel->add_option("--window", window_name, "Analysis window: sqrt_hann, hann or rect");
  cancel->add_option("--csv", cancel_csv, "Write the ERLE curve to this CSV");

  std::string metrics_mode;
  std::vector<std::string> metrics_wavs;
  std::string metrics_csv;
  double window_s = 1.0;
  double hop_s = 0.25;
  CLI::App* metrics = app.add_subcommand("metrics", "Compute ERLE or tERLE from WAV files");
  metrics->add_option("--mode", metrics_mode, "erle (mic, estimate) or terle (echo, estimate, near end)")
      ->required();
  metrics->add_option("wavs", metrics_wavs, "Input WAV files in the order listed above")
      ->required();
  metrics->add_option("--csv", metrics_csv, "Write the curve to this CSV");
  metrics->add_option("--window-s", window_s, "Averaging window in seconds");
  metrics->add_option("--hop-s", hop_s, "Evaluation hop in seconds");

  std::string cal_in;
  std::string cal_kind;
  std::string cal_out;
  double cal_target = 5.0;
  double cal_rho = 2.0;
  CLI::App* calibrate =
      app.add_subcommand("calibrate-sdr", "Find the distortion threshold for a target SDR");
  calibrate->add_option("--in", cal_in, "Input WAV")->required();
  calibrate->add_option("--kind", cal_kind, "hard_clip (hard) or soft_saturation (soft)")
      ->required();
  calibrate->add_option("--target", cal_target, "Target SDR in dB")->required();
  calibrate->add_option("--rho", cal_rho, "Soft saturation shape parameter");
  calibrate->add_option("--out", cal_out, "Write the distorted signal to this WAV");

  std::string rir_config;
  std::string rir_out;
  CLI::App* rir = app.add_subcommand("rir", "Generate an image-method room impulse response");
  rir->add_option("--config", rir_config, "Room spec (JSON); defaults used when omitted");
  rir->add_option("--out", rir_out, "Output WAV")->required();

  simulate->callback([&] { RunSimulate(config_path, out_dir, seed_override); });
  cancel->callback([&] {
    params.stft.window = sbaec::ParseWindowType(window_name);
    RunCancel(far_path, mic_path, cancel_out, params, cancel_csv);
  });
  metrics->callback(
      [&] { RunMetrics(metrics_mode, metrics_wavs, metrics_csv, window_s, hop_s); });
  calibrate->callback([&] { RunCalibrate(cal_in, cal_kind, cal_target, cal_rho, cal_out); });
  rir->callback([&] { RunRir(rir_config, rir_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return 1;
  } catch (const sbaec::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sbaec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
