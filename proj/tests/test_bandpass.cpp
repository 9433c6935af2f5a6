#include <cmath>
#include <numbers>

#include <doctest.h>

#include "sslens/bandpass.hpp"

using namespace sslens;

namespace {

AudioSignal tone(double freq, double seconds, int sample_rate) {
  AudioSignal s;
  s.sample_rate = sample_rate;
  const int n = static_cast<int>(seconds * sample_rate);
  s.samples = Eigen::VectorXd(n);
  for (int i = 0; i < n; ++i) {
    s.samples[i] = std::sin(2.0 * std::numbers::pi * freq * i / sample_rate);
  }
  return s;
}

// RMS over the middle of the signal, avoiding filter edge transients.
double interior_rms(const AudioSignal& s) {
  const Eigen::Index n = s.samples.size();
  const Eigen::Index skip = n / 4;
  return std::sqrt(s.samples.segment(skip, n - 2 * skip).squaredNorm() /
                   static_cast<double>(n - 2 * skip));
}

double db_ratio(double a, double b) { return 20.0 * std::log10(a / b); }

}  // namespace

TEST_CASE("fully open band returns the input") {
  const AudioSignal s = tone(1000.0, 0.5, 16000);
  const AudioSignal out = bandpass(s, {0.0, 8000.0});
  CHECK((out.samples - s.samples).cwiseAbs().maxCoeff() == 0.0);
  CHECK(out.samples.size() == s.samples.size());
}

TEST_CASE("stopband tone is attenuated by at least 60 dB") {
  const AudioSignal s = tone(1000.0, 1.0, 16000);
  const AudioSignal out = bandpass(s, {2000.0, 4000.0});
  CHECK(out.samples.size() == s.samples.size());
  CHECK(db_ratio(interior_rms(out), interior_rms(s)) <= -60.0);
}

TEST_CASE("passband tone passes within 1 dB") {
  const AudioSignal s = tone(3000.0, 1.0, 16000);
  const AudioSignal out = bandpass(s, {2000.0, 4000.0});
  CHECK(std::abs(db_ratio(interior_rms(out), interior_rms(s))) < 1.0);
}

TEST_CASE("group delay is compensated") {
  // A passband tone should stay phase-aligned with the input.
  const AudioSignal s = tone(3000.0, 1.0, 16000);
  const AudioSignal out = bandpass(s, {2000.0, 4000.0});
  const Eigen::Index n = s.samples.size();
  const auto mid_in = s.samples.segment(n / 4, n / 2);
  const auto mid_out = out.samples.segment(n / 4, n / 2);
  const double corr = mid_in.dot(mid_out) /
                      std::sqrt(mid_in.squaredNorm() * mid_out.squaredNorm());
  CHECK(corr > 0.99);
}

TEST_CASE("high-pass only and low-pass only stages") {
  const AudioSignal low = tone(500.0, 1.0, 16000);
  const AudioSignal high = tone(6000.0, 1.0, 16000);
  // f_max at Nyquist disables the low-pass stage.
  const AudioSignal hp_low = bandpass(low, {2000.0, 8000.0});
  const AudioSignal hp_high = bandpass(high, {2000.0, 8000.0});
  CHECK(db_ratio(interior_rms(hp_low), interior_rms(low)) <= -60.0);
  CHECK(std::abs(db_ratio(interior_rms(hp_high), interior_rms(high))) < 1.0);
  // f_min = 0 disables the high-pass stage.
  const AudioSignal lp_low = bandpass(low, {0.0, 2000.0});
  const AudioSignal lp_high = bandpass(high, {0.0, 2000.0});
  CHECK(std::abs(db_ratio(interior_rms(lp_low), interior_rms(low))) < 1.0);
  CHECK(db_ratio(interior_rms(lp_high), interior_rms(high)) <= -60.0);
}

TEST_CASE("filtering twice changes RMS by at most 0.2 dB") {
  AudioSignal noise;
  noise.sample_rate = 16000;
  noise.samples = Eigen::VectorXd::Random(16000);
  const BandConfig band{1200.0, 5200.0};
  const AudioSignal once = bandpass(noise, band);
  const AudioSignal twice = bandpass(once, band);
  CHECK(std::abs(db_ratio(interior_rms(twice), interior_rms(once))) <= 0.2);
}

TEST_CASE("invalid bands are rejected") {
  const AudioSignal s = tone(1000.0, 0.1, 16000);
  CHECK_THROWS_AS(bandpass(s, {4000.0, 2000.0}), std::invalid_argument);
  CHECK_THROWS_AS(bandpass(s, {2000.0, 2000.0}), std::invalid_argument);
  CHECK_THROWS_AS(bandpass(s, {0.0, 9000.0}), std::invalid_argument);
}
