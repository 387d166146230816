#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "sbaec/common.h"
#include "sbaec/signal_gen.h"
#include "sbaec/stft.h"
#include "sbaec/time_signal.h"
#include "sbaec/wav_io.h"

namespace {

using sbaec::GaussianSampler;
using sbaec::Spectrogram;
using sbaec::StftConfig;
using sbaec::TimeSignal;
using sbaec::WindowType;

TimeSignal Noise(std::size_t length, int fs, std::uint64_t seed) {
  GaussianSampler g(seed);
  TimeSignal x;
  x.sample_rate = fs;
  x.samples.resize(length);
  for (double& v : x.samples) v = 0.1 * g.Next();
  return x;
}

double MaxAbsError(const TimeSignal& a, const TimeSignal& b) {
  REQUIRE(a.size() == b.size());
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    err = std::max(err, std::fabs(a.samples[i] - b.samples[i]));
  }
  return err;
}

// Signal sample t lands at padded index t + (fft_size - hop); frame n starts
// at padded index n*hop. Mirrors the documented frame coverage.
std::vector<double> PaddedInput(const TimeSignal& x, const StftConfig& cfg, int num_frames) {
  const std::size_t pad = static_cast<std::size_t>(cfg.fft_size - cfg.hop);
  std::vector<double> padded(static_cast<std::size_t>(num_frames - 1) * cfg.hop + cfg.fft_size,
                             0.0);
  std::copy(x.samples.begin(), x.samples.end(), padded.begin() + static_cast<long>(pad));
  return padded;
}

std::filesystem::path TempDir() {
  const auto dir = std::filesystem::temp_directory_path() / "sbaec_test_signal_core";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("stft config validation") {
  CHECK_NOTHROW(sbaec::ValidateStftConfig(StftConfig{}));
  CHECK_NOTHROW(sbaec::ValidateStftConfig(StftConfig{8192, 1024, WindowType::kSqrtHann}));

  CHECK_THROWS_AS(sbaec::ValidateStftConfig(StftConfig{0, 256, WindowType::kSqrtHann}),
                  sbaec::ConfigError);
  CHECK_THROWS_AS(sbaec::ValidateStftConfig(StftConfig{4095, 1024, WindowType::kSqrtHann}),
                  sbaec::ConfigError);
  CHECK_THROWS_AS(sbaec::ValidateStftConfig(StftConfig{4096, 0, WindowType::kSqrtHann}),
                  sbaec::ConfigError);
  CHECK_THROWS_AS(sbaec::ValidateStftConfig(StftConfig{4096, 8192, WindowType::kSqrtHann}),
                  sbaec::ConfigError);
  // Rectangular windows overlap-add to a constant only when hop divides size.
  CHECK_NOTHROW(sbaec::ValidateStftConfig(StftConfig{1024, 1024, WindowType::kRect}));
  CHECK_NOTHROW(sbaec::ValidateStftConfig(StftConfig{1024, 256, WindowType::kRect}));
  CHECK_THROWS_AS(sbaec::ValidateStftConfig(StftConfig{1024, 700, WindowType::kRect}),
                  sbaec::ConfigError);

  CHECK(sbaec::ParseWindowType("sqrt_hann") == WindowType::kSqrtHann);
  CHECK(sbaec::ParseWindowType("hann") == WindowType::kHann);
  CHECK(sbaec::ParseWindowType("rect") == WindowType::kRect);
  CHECK_THROWS_AS(sbaec::ParseWindowType("hamming"), sbaec::ConfigError);
  CHECK(sbaec::WindowTypeName(WindowType::kSqrtHann) == "sqrt_hann");
}

TEST_CASE("frame count covers every sample") {
  const StftConfig cfg;
  CHECK(cfg.num_bins() == 2049);
  // One sample still needs a frame; the pad shifts it into frame coverage.
  CHECK(sbaec::NumStftFrames(1, cfg) == (4096 - 1024) / 1024 + 1);
  // 10 s at 16 kHz with the default hop.
  const int frames_10s = sbaec::NumStftFrames(160000, cfg);
  CHECK(frames_10s == static_cast<int>((3072 + 160000 - 1) / 1024) + 1);
  const TimeSignal x = Noise(160000, 16000, 1);
  CHECK(static_cast<int>(sbaec::Stft(x, cfg).num_frames()) == frames_10s);
}

TEST_CASE("stft of silence is zero and of an impulse is flat") {
  StftConfig cfg{256, 64, WindowType::kSqrtHann};
  TimeSignal zero;
  zero.sample_rate = 16000;
  zero.samples.assign(1000, 0.0);
  const Spectrogram spec = sbaec::Stft(zero, cfg);
  for (const auto& frame : spec.frames) {
    for (const auto& bin : frame) CHECK(std::abs(bin) == 0.0);
  }

  // Rect window, hop == size: no padding offset inside frame 0, so a unit
  // impulse at sample 0 gives X(k) = 1 for every bin.
  StftConfig rect{256, 256, WindowType::kRect};
  TimeSignal impulse;
  impulse.sample_rate = 16000;
  impulse.samples.assign(256, 0.0);
  impulse.samples[0] = 1.0;
  const Spectrogram flat = sbaec::Stft(impulse, rect);
  REQUIRE(flat.num_frames() == 1);
  for (const auto& bin : flat.frames[0]) {
    CHECK(std::abs(bin - std::complex<double>{1.0, 0.0}) < 1e-12);
  }
}

TEST_CASE("stft matches a brute-force windowed dft") {
  StftConfig cfg{512, 128, WindowType::kSqrtHann};
  const TimeSignal x = Noise(2000, 16000, 7);
  const Spectrogram spec = sbaec::Stft(x, cfg);
  const std::vector<double> window = sbaec::AnalysisWindow(cfg);
  const std::vector<double> padded = PaddedInput(x, cfg, static_cast<int>(spec.num_frames()));

  for (std::size_t n : {std::size_t{0}, spec.num_frames() / 2, spec.num_frames() - 1}) {
    for (int k = 0; k < cfg.num_bins(); ++k) {
      std::complex<double> acc{0.0, 0.0};
      for (int i = 0; i < cfg.fft_size; ++i) {
        const double v = window[static_cast<std::size_t>(i)] *
                         padded[n * static_cast<std::size_t>(cfg.hop) + static_cast<std::size_t>(i)];
        const double phase = -2.0 * std::numbers::pi * k * i / cfg.fft_size;
        acc += v * std::complex<double>{std::cos(phase), std::sin(phase)};
      }
      CHECK(std::abs(spec.frames[n][static_cast<std::size_t>(k)] - acc) < 1e-9);
    }
  }
}

TEST_CASE("pure tone concentrates in its bin") {
  // 1 kHz at 16 kHz with fft 4096 is exactly bin 256.
  const StftConfig cfg;
  TimeSignal x;
  x.sample_rate = 16000;
  x.samples.resize(16000);
  for (std::size_t t = 0; t < x.samples.size(); ++t) {
    x.samples[t] = std::sin(2.0 * std::numbers::pi * 1000.0 * static_cast<double>(t) / 16000.0);
  }
  const Spectrogram spec = sbaec::Stft(x, cfg);
  const std::size_t mid = spec.num_frames() / 2;
  std::size_t peak = 0;
  for (std::size_t k = 1; k < spec.frames[mid].size(); ++k) {
    if (std::abs(spec.frames[mid][k]) > std::abs(spec.frames[mid][peak])) peak = k;
  }
  CHECK(peak == 256);
}

TEST_CASE("per-frame parseval ties bins to windowed samples") {
  StftConfig cfg{512, 128, WindowType::kSqrtHann};
  const TimeSignal x = Noise(3000, 16000, 11);
  const Spectrogram spec = sbaec::Stft(x, cfg);
  const std::vector<double> window = sbaec::AnalysisWindow(cfg);
  const std::vector<double> padded = PaddedInput(x, cfg, static_cast<int>(spec.num_frames()));

  for (std::size_t n : {std::size_t{1}, spec.num_frames() / 2}) {
    double time_energy = 0.0;
    for (int i = 0; i < cfg.fft_size; ++i) {
      const double v = window[static_cast<std::size_t>(i)] *
                       padded[n * static_cast<std::size_t>(cfg.hop) + static_cast<std::size_t>(i)];
      time_energy += v * v;
    }
    // One-sided layout: interior bins carry their conjugate twins' energy.
    double freq_energy = std::norm(spec.frames[n].front()) + std::norm(spec.frames[n].back());
    for (std::size_t k = 1; k + 1 < spec.frames[n].size(); ++k) {
      freq_energy += 2.0 * std::norm(spec.frames[n][k]);
    }
    freq_energy /= cfg.fft_size;
    CHECK(std::fabs(freq_energy - time_energy) < 1e-9 * std::max(1.0, time_energy));
  }
}

TEST_CASE("stft is linear") {
  StftConfig cfg{512, 128, WindowType::kSqrtHann};
  const TimeSignal x = Noise(2500, 16000, 3);
  const TimeSignal y = Noise(2500, 16000, 4);
  TimeSignal mix;
  mix.sample_rate = 16000;
  mix.samples.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mix.samples[i] = 2.0 * x.samples[i] - 3.0 * y.samples[i];
  }
  const Spectrogram sx = sbaec::Stft(x, cfg);
  const Spectrogram sy = sbaec::Stft(y, cfg);
  const Spectrogram sm = sbaec::Stft(mix, cfg);
  double scale = 0.0;
  for (const auto& frame : sm.frames) {
    for (const auto& bin : frame) scale = std::max(scale, std::abs(bin));
  }
  for (std::size_t n = 0; n < sm.num_frames(); ++n) {
    for (std::size_t k = 0; k < sm.frames[n].size(); ++k) {
      const std::complex<double> want = 2.0 * sx.frames[n][k] - 3.0 * sy.frames[n][k];
      CHECK(std::abs(sm.frames[n][k] - want) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("spectrogram energy sums all bins") {
  StftConfig cfg{256, 64, WindowType::kSqrtHann};
  const TimeSignal x = Noise(1000, 16000, 5);
  const Spectrogram spec = sbaec::Stft(x, cfg);
  double want = 0.0;
  for (const auto& frame : spec.frames) {
    for (const auto& bin : frame) want += std::norm(bin);
  }
  CHECK(sbaec::SpectrogramEnergy(spec) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("stft round trip is transparent") {
  const struct {
    StftConfig cfg;
    std::size_t length;
  } cases[] = {
      {{4096, 1024, WindowType::kSqrtHann}, 16000},
      {{4096, 1024, WindowType::kSqrtHann}, 16001},  // not a hop multiple
      {{8192, 1024, WindowType::kSqrtHann}, 20000},
      {{512, 128, WindowType::kHann}, 5000},
      {{512, 128, WindowType::kRect}, 5000},
      {{512, 512, WindowType::kRect}, 5000},
  };
  std::uint64_t seed = 100;
  for (const auto& c : cases) {
    CAPTURE(c.cfg.fft_size);
    CAPTURE(c.cfg.hop);
    TimeSignal x = Noise(c.length, 16000, seed++);
    // AR(1) coloring: round trip must not depend on spectral shape.
    for (std::size_t t = 1; t < x.samples.size(); ++t) {
      x.samples[t] += 0.9 * x.samples[t - 1];
    }
    const TimeSignal back = sbaec::Istft(sbaec::Stft(x, c.cfg), c.cfg, x.size(), 16000);
    CHECK(back.sample_rate == 16000);
    CHECK(MaxAbsError(x, back) < 1e-10 * std::max(1.0, sbaec::PeakAbs(x)));
  }
}

TEST_CASE("istft rejects mismatched shapes") {
  StftConfig cfg{256, 64, WindowType::kSqrtHann};
  const TimeSignal x = Noise(1000, 16000, 6);
  Spectrogram spec = sbaec::Stft(x, cfg);

  StftConfig other{512, 64, WindowType::kSqrtHann};
  CHECK_THROWS_AS(sbaec::Istft(spec, other, x.size(), 16000), sbaec::ShapeError);
  spec.frames[0].pop_back();
  CHECK_THROWS_AS(sbaec::Istft(spec, cfg, x.size(), 16000), sbaec::ShapeError);
  CHECK_THROWS_AS(sbaec::Stft(TimeSignal{}, cfg), sbaec::ArgumentError);
}

TEST_CASE("white noise generator hits its rms and seed contract") {
  const TimeSignal a = sbaec::GenerateWhiteNoise(2.0, 16000, 42, 0.05);
  CHECK(a.sample_rate == 16000);
  CHECK(a.size() == 32000);
  CHECK(std::sqrt(sbaec::SignalPower(a)) == doctest::Approx(0.05).epsilon(0.05));

  const TimeSignal b = sbaec::GenerateWhiteNoise(2.0, 16000, 42, 0.05);
  CHECK(MaxAbsError(a, b) == 0.0);
  const TimeSignal c = sbaec::GenerateWhiteNoise(2.0, 16000, 43, 0.05);
  CHECK(MaxAbsError(a, c) > 0.0);

  // rms 0 is the documented stand-in for an absent source.
  const TimeSignal silent = sbaec::GenerateWhiteNoise(1.0, 16000, 1, 0.0);
  CHECK(sbaec::PeakAbs(silent) == 0.0);
  CHECK_THROWS_AS(sbaec::GenerateWhiteNoise(1.0, 16000, 1, -0.1), sbaec::ArgumentError);
}

TEST_CASE("speech-like generator is deterministic, bursty and normalized") {
  const TimeSignal a = sbaec::GenerateSpeechLike(4.0, 16000, 9);
  CHECK(a.size() == 64000);
  CHECK(sbaec::PeakAbs(a) == doctest::Approx(0.5).epsilon(1e-9));
  const TimeSignal b = sbaec::GenerateSpeechLike(4.0, 16000, 9);
  CHECK(MaxAbsError(a, b) == 0.0);

  // Syllabic amplitude structure: some 100 ms stretches are much quieter
  // than others, unlike stationary noise.
  double min_rms = 1e9, max_rms = 0.0;
  const std::size_t win = 1600;
  for (std::size_t start = 0; start + win <= a.size(); start += win) {
    double e = 0.0;
    for (std::size_t i = start; i < start + win; ++i) e += a.samples[i] * a.samples[i];
    const double rms = std::sqrt(e / static_cast<double>(win));
    min_rms = std::min(min_rms, rms);
    max_rms = std::max(max_rms, rms);
  }
  CHECK(max_rms > 4.0 * min_rms);
}

TEST_CASE("gaussian sampler moments and derived seeds") {
  GaussianSampler g(123);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = g.Next();
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.02);
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));

  GaussianSampler u(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.Uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }

  CHECK(sbaec::DeriveSeed(1, 1) != sbaec::DeriveSeed(1, 2));
  CHECK(sbaec::DeriveSeed(1, 1) != sbaec::DeriveSeed(2, 1));
  CHECK(sbaec::DeriveSeed(7, 3) == sbaec::DeriveSeed(7, 3));
}

TEST_CASE("wav float32 round trip") {
  const auto path = (TempDir() / "float.wav").string();
  const TimeSignal x = Noise(4321, 16000, 77);
  sbaec::WriteWav(path, x, sbaec::WavFormat::kFloat32);
  const TimeSignal back = sbaec::ReadWav(path);
  REQUIRE(back.size() == x.size());
  CHECK(back.sample_rate == 16000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    // Only float32 quantization separates the copies.
    CHECK(back.samples[i] == static_cast<double>(static_cast<float>(x.samples[i])));
  }
}

TEST_CASE("wav pcm16 quantization and clamping") {
  const auto path = (TempDir() / "pcm.wav").string();
  TimeSignal x;
  x.sample_rate = 16000;
  for (int k : {-32768, -12345, -1, 0, 1, 9999, 32767}) {
    x.samples.push_back(k / 32768.0);
  }
  x.samples.push_back(1.0);    // rounds to 32768, clamps to 32767
  x.samples.push_back(-1.5);   // clamps to -32768
  sbaec::WriteWav(path, x, sbaec::WavFormat::kPcm16);
  const TimeSignal back = sbaec::ReadWav(path);
  REQUIRE(back.size() == x.size());
  for (std::size_t i = 0; i + 2 < x.size(); ++i) CHECK(back.samples[i] == x.samples[i]);
  CHECK(back.samples[x.size() - 2] == 32767.0 / 32768.0);
  CHECK(back.samples[x.size() - 1] == -1.0);
}

TEST_CASE("wav reader selects a channel from interleaved input") {
  // Hand-built stereo PCM16 file: left ramps up, right mirrors it.
  const auto path = (TempDir() / "stereo.wav").string();
  const int frames = 100;
  std::vector<std::int16_t> interleaved;
  for (int i = 0; i < frames; ++i) {
    interleaved.push_back(static_cast<std::int16_t>(i * 100));
    interleaved.push_back(static_cast<std::int16_t>(-i * 100));
  }
  const std::uint32_t data_size = static_cast<std::uint32_t>(interleaved.size() * 2);
  std::ofstream f(path, std::ios::binary);
  auto u32 = [&f](std::uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); };
  auto u16 = [&f](std::uint16_t v) { f.write(reinterpret_cast<const char*>(&v), 2); };
  f.write("RIFF", 4);
  u32(36 + data_size);
  f.write("WAVE", 4);
  f.write("fmt ", 4);
  u32(16);
  u16(1);      // PCM
  u16(2);      // stereo
  u32(8000);   // sample rate
  u32(8000 * 4);
  u16(4);      // block align
  u16(16);     // bits
  f.write("data", 4);
  u32(data_size);
  f.write(reinterpret_cast<const char*>(interleaved.data()), data_size);
  f.close();

  const TimeSignal left = sbaec::ReadWav(path, 0);
  const TimeSignal right = sbaec::ReadWav(path, 1);
  REQUIRE(left.size() == static_cast<std::size_t>(frames));
  CHECK(left.sample_rate == 8000);
  for (int i = 0; i < frames; ++i) {
    CHECK(left.samples[static_cast<std::size_t>(i)] == i * 100 / 32768.0);
    CHECK(right.samples[static_cast<std::size_t>(i)] == -i * 100 / 32768.0);
  }
  CHECK_THROWS_AS(sbaec::ReadWav(path, 2), sbaec::IoError);
}

TEST_CASE("wav reader rejects missing and malformed files") {
  CHECK_THROWS_AS(sbaec::ReadWav((TempDir() / "does_not_exist.wav").string()),
                  sbaec::IoError);
  const auto path = (TempDir() / "garbage.wav").string();
  std::ofstream(path) << "this is not a wav file";
  CHECK_THROWS_AS(sbaec::ReadWav(path), sbaec::IoError);
}
