#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "doctest.h"
#include "sbaec/common.h"
#include "sbaec/metrics.h"
#include "sbaec/nonlinearity.h"
#include "sbaec/room.h"
#include "sbaec/signal_gen.h"
#include "sbaec/time_signal.h"

namespace {

using sbaec::NonlinearModel;
using sbaec::RoomSpec;
using sbaec::TimeSignal;

double Distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d);
}

// Backward-integrated decay fit: least squares on the -5..-25 dB stretch of
// 10*log10 EDC(t), extrapolated to 60 dB.
double SchroederT60(const TimeSignal& rir) {
  std::vector<double> edc(rir.size());
  double acc = 0.0;
  for (std::size_t i = rir.size(); i-- > 0;) {
    acc += rir.samples[i] * rir.samples[i];
    edc[i] = acc;
  }
  REQUIRE(acc > 0.0);
  double sum_t = 0.0, sum_d = 0.0, sum_tt = 0.0, sum_td = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < edc.size(); ++i) {
    const double db = 10.0 * std::log10(edc[i] / edc[0]);
    if (db > -5.0 || db < -25.0) continue;
    const double t = static_cast<double>(i) / rir.sample_rate;
    sum_t += t;
    sum_d += db;
    sum_tt += t * t;
    sum_td += t * db;
    ++n;
  }
  REQUIRE(n > 10);
  const double slope = (n * sum_td - sum_t * sum_d) / (n * sum_tt - sum_t * sum_t);
  REQUIRE(slope < 0.0);
  return -60.0 / slope;
}

TimeSignal SingleTap(double value, int fs) {
  return TimeSignal{{value}, fs};
}

}  // namespace

TEST_CASE("reflection coefficient follows the absorption inversion") {
  const RoomSpec spec;  // 5 x 4 x 3 m, t60 0.2 s
  const double volume = 60.0;
  const double area = 94.0;
  const double alpha =
      24.0 * volume * std::numbers::ln10 / (spec.sound_speed * area * spec.t60_s);
  const double want = std::sqrt(1.0 - alpha);
  CHECK(sbaec::ReflectionCoefficient(spec) == doctest::Approx(want).epsilon(1e-12));

  // Absorption above 1 clamps to a fully dead room.
  RoomSpec dead = spec;
  dead.t60_s = 0.05;
  CHECK(sbaec::ReflectionCoefficient(dead) == 0.0);
}

TEST_CASE("dead room leaves exactly the direct path") {
  RoomSpec spec;
  spec.t60_s = 0.05;  // clamps the reflection coefficient to zero
  spec.rir_length = 512;
  const TimeSignal rir = sbaec::GenerateRir(spec);
  REQUIRE(rir.size() == 512);
  CHECK(rir.sample_rate == spec.sample_rate);

  const double dist = Distance(spec.source, spec.mic);
  const auto delay = static_cast<std::size_t>(
      std::lround(dist / spec.sound_speed * spec.sample_rate));
  for (std::size_t i = 0; i < rir.size(); ++i) {
    if (i == delay) {
      CHECK(rir.samples[i] ==
            doctest::Approx(1.0 / (4.0 * std::numbers::pi * dist)).epsilon(1e-12));
    } else {
      CHECK(rir.samples[i] == 0.0);
    }
  }
}

TEST_CASE("direct-path amplitude falls off as 1/distance") {
  RoomSpec near_spec;
  near_spec.t60_s = 0.05;
  near_spec.rir_length = 512;
  near_spec.source = {1.0, 2.0, 1.5};
  near_spec.mic = {1.5, 2.0, 1.5};  // 0.5 m
  RoomSpec far_spec = near_spec;
  far_spec.mic = {2.0, 2.0, 1.5};  // 1.0 m

  const TimeSignal near_rir = sbaec::GenerateRir(near_spec);
  const TimeSignal far_rir = sbaec::GenerateRir(far_spec);
  CHECK(sbaec::PeakAbs(near_rir) == doctest::Approx(2.0 * sbaec::PeakAbs(far_rir)).epsilon(1e-12));
}

TEST_CASE("generated rir decays at the requested rate") {
  const RoomSpec spec;  // t60 0.2 s, 3200 taps
  const TimeSignal rir = sbaec::GenerateRir(spec);
  REQUIRE(rir.size() == 3200);

  const double t60 = SchroederT60(rir);
  CHECK(t60 > 0.15);
  CHECK(t60 < 0.25);

  // Energy must move front to back: first half dominates.
  double head = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < rir.size(); ++i) {
    (i < rir.size() / 2 ? head : tail) += rir.samples[i] * rir.samples[i];
  }
  CHECK(head > 10.0 * tail);

  const TimeSignal again = sbaec::GenerateRir(spec);
  for (std::size_t i = 0; i < rir.size(); ++i) CHECK(rir.samples[i] == again.samples[i]);
}

TEST_CASE("room geometry validation") {
  RoomSpec spec;
  spec.source = {6.0, 1.0, 1.0};
  CHECK_THROWS_AS(sbaec::GenerateRir(spec), sbaec::ArgumentError);
  spec = RoomSpec{};
  spec.mic = {2.5, 0.0, 1.2};
  CHECK_THROWS_AS(sbaec::GenerateRir(spec), sbaec::ArgumentError);
  spec = RoomSpec{};
  spec.t60_s = -1.0;
  CHECK_THROWS_AS(sbaec::GenerateRir(spec), sbaec::ArgumentError);
  spec = RoomSpec{};
  spec.rir_length = 10;  // shorter than the direct-path delay
  CHECK_THROWS_AS(sbaec::GenerateRir(spec), sbaec::ArgumentError);
}

TEST_CASE("convolution against a direct evaluation") {
  const TimeSignal x = sbaec::GenerateWhiteNoise(0.05, 16000, 2, 0.1);  // 800 samples
  sbaec::GaussianSampler g(3);
  TimeSignal h;
  h.sample_rate = 16000;
  h.samples.resize(64);
  for (double& v : h.samples) v = g.Next();

  const TimeSignal fast = sbaec::Convolve(x, h);
  REQUIRE(fast.size() == x.size());
  double scale = sbaec::PeakAbs(fast);
  for (std::size_t n = 0; n < x.size(); ++n) {
    double direct = 0.0;
    for (std::size_t m = 0; m < h.size() && m <= n; ++m) {
      direct += h.samples[m] * x.samples[n - m];
    }
    CHECK(std::fabs(fast.samples[n] - direct) <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("convolution identity and pure delay") {
  const TimeSignal x = sbaec::GenerateWhiteNoise(0.02, 16000, 4, 0.1);
  const TimeSignal same = sbaec::Convolve(x, SingleTap(1.0, 16000));
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(same.samples[i] == doctest::Approx(x.samples[i]).epsilon(1e-12));
  }

  TimeSignal delay;
  delay.sample_rate = 16000;
  delay.samples = {0.0, 0.0, 1.0};
  const TimeSignal shifted = sbaec::Convolve(x, delay);
  CHECK(std::fabs(shifted.samples[0]) < 1e-12);
  CHECK(std::fabs(shifted.samples[1]) < 1e-12);
  for (std::size_t i = 2; i < x.size(); ++i) {
    CHECK(shifted.samples[i] == doctest::Approx(x.samples[i - 2]).epsilon(1e-12));
  }

  TimeSignal wrong_rate = delay;
  wrong_rate.sample_rate = 8000;
  CHECK_THROWS_AS(sbaec::Convolve(x, wrong_rate), sbaec::ArgumentError);
}

TEST_CASE("mixture gain solves the power ratio exactly") {
  const TimeSignal x = sbaec::GenerateWhiteNoise(0.5, 16000, 5, 0.1);
  // Near end chosen as twice the echo: power-of-two scaling keeps every
  // intermediate exact, so the solved gain must be exactly 1/2.
  const TimeSignal echo = sbaec::Convolve(x, SingleTap(1.0, 16000));
  TimeSignal near = echo;
  for (double& v : near.samples) v *= 2.0;

  const sbaec::MixtureScenario mix =
      sbaec::SynthesizeMixture(x, near, NonlinearModel::Identity(), SingleTap(1.0, 16000), 0.0);
  CHECK(mix.near_end_gain == 0.5);
  CHECK(mix.achieved_esr_db == 0.0);
  for (std::size_t i = 0; i < mix.microphone.size(); ++i) {
    CHECK(mix.near_end_scaled.samples[i] == mix.echo.samples[i]);
  }
}

TEST_CASE("mixture hits a 60 dB ratio and its books balance") {
  const TimeSignal far = sbaec::GenerateSpeechLike(2.0, 16000, 6);
  const TimeSignal near = sbaec::GenerateWhiteNoise(2.0, 16000, 7, 0.05);
  RoomSpec spec;
  const TimeSignal rir = sbaec::GenerateRir(spec);
  const sbaec::MixtureScenario mix =
      sbaec::SynthesizeMixture(far, near, NonlinearModel::HardClip(0.2), rir, 60.0);

  CHECK(std::fabs(mix.achieved_esr_db - 60.0) <= 1e-6);
  CHECK(std::fabs(sbaec::MeasureEsr(mix.echo, mix.near_end_scaled) - 60.0) <= 1e-6);
  // y - d - g*s must vanish identically, not just to rounding.
  for (std::size_t i = 0; i < mix.microphone.size(); ++i) {
    CHECK(mix.microphone.samples[i] - mix.echo.samples[i] - mix.near_end_scaled.samples[i] ==
          0.0);
  }
}

TEST_CASE("mixture without a target leaves the near end alone") {
  const TimeSignal far = sbaec::GenerateWhiteNoise(0.2, 16000, 8, 0.1);
  const TimeSignal near = sbaec::GenerateWhiteNoise(0.2, 16000, 9, 0.1);
  const sbaec::MixtureScenario mix = sbaec::SynthesizeMixture(
      far, near, NonlinearModel::Identity(), SingleTap(1.0, 16000), std::nullopt);
  CHECK(mix.near_end_gain == 1.0);
  // The stored near end is y - d, so it matches the input to rounding only.
  for (std::size_t i = 0; i < near.size(); ++i) {
    CHECK(std::fabs(mix.near_end_scaled.samples[i] - near.samples[i]) < 1e-12);
  }

  // A silent near end is fine without a target: the microphone is pure echo.
  TimeSignal silent;
  silent.sample_rate = 16000;
  silent.samples.assign(far.size(), 0.0);
  const sbaec::MixtureScenario pure = sbaec::SynthesizeMixture(
      far, silent, NonlinearModel::Identity(), SingleTap(1.0, 16000), std::nullopt);
  for (std::size_t i = 0; i < pure.microphone.size(); ++i) {
    CHECK(pure.microphone.samples[i] == pure.echo.samples[i]);
  }
}

TEST_CASE("mixture rejects ratios it cannot reach") {
  const TimeSignal far = sbaec::GenerateWhiteNoise(0.2, 16000, 10, 0.1);
  TimeSignal silent;
  silent.sample_rate = 16000;
  silent.samples.assign(far.size(), 0.0);
  CHECK_THROWS_AS(sbaec::SynthesizeMixture(far, silent, NonlinearModel::Identity(),
                                           SingleTap(1.0, 16000), 10.0),
                  sbaec::ArgumentError);
  CHECK_THROWS_AS(sbaec::SynthesizeMixture(silent, far, NonlinearModel::Identity(),
                                           SingleTap(1.0, 16000), 10.0),
                  sbaec::ArgumentError);
}

TEST_CASE("mixture pads unequal lengths to the longer signal") {
  const TimeSignal far = sbaec::GenerateWhiteNoise(0.2, 16000, 11, 0.1);   // 3200
  const TimeSignal near = sbaec::GenerateWhiteNoise(0.1, 16000, 12, 0.1);  // 1600
  const sbaec::MixtureScenario mix = sbaec::SynthesizeMixture(
      far, near, NonlinearModel::Identity(), SingleTap(1.0, 16000), std::nullopt);
  CHECK(mix.microphone.size() == far.size());
  CHECK(mix.near_end_scaled.size() == far.size());
  for (std::size_t i = near.size(); i < far.size(); ++i) {
    CHECK(mix.near_end_scaled.samples[i] == 0.0);
  }
}
