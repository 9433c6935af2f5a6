#include "sslens/bandpass.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sslens/fft.hpp"

namespace sslens {

namespace {

constexpr double kStopbandDb = 60.0;
constexpr double kTransitionHz = 100.0;

double bessel_i0(double x) {
  // Series expansion; converges quickly for the beta values used here.
  double sum = 1.0;
  double term = 1.0;
  const double half = 0.5 * x;
  for (int k = 1; k < 200; ++k) {
    term *= (half / k) * (half / k);
    sum += term;
    if (term < 1e-21 * sum) break;
  }
  return sum;
}

// Ideal low-pass impulse response at lag i; lp(Nyquist) is a unit impulse,
// lp(0) is zero, so a band-pass is lp(f_max) - lp(f_min).
double ideal_lowpass(double cutoff, int sample_rate, int lag) {
  if (lag == 0) return 2.0 * cutoff / sample_rate;
  const double w = 2.0 * std::numbers::pi * cutoff / sample_rate;
  return std::sin(w * lag) / (std::numbers::pi * lag);
}

}  // namespace

void validate(const BandConfig& band, double nyquist) {
  if (band.f_min < 0.0) {
    throw std::invalid_argument("BandConfig: f_min must be >= 0");
  }
  if (band.f_min >= band.f_max) {
    throw std::invalid_argument("BandConfig: f_min " +
                                std::to_string(band.f_min) + " >= f_max " +
                                std::to_string(band.f_max));
  }
  if (band.f_max > nyquist) {
    throw std::invalid_argument("BandConfig: f_max " +
                                std::to_string(band.f_max) +
                                " exceeds Nyquist " + std::to_string(nyquist));
  }
}

Eigen::VectorXd design_bandpass_fir(const BandConfig& band, int sample_rate) {
  const double nyquist = 0.5 * sample_rate;
  validate(band, nyquist);

  // Kaiser formulas for the window shape and order.
  const double beta = 0.1102 * (kStopbandDb - 8.7);
  const double delta_w = 2.0 * std::numbers::pi * kTransitionHz / sample_rate;
  int order =
      static_cast<int>(std::ceil((kStopbandDb - 7.95) / (2.285 * delta_w)));
  if (order % 2 != 0) ++order;  // odd tap count, symmetric
  const int half = order / 2;

  const double f_lo = band.highpass_enabled() ? band.f_min : 0.0;
  const double f_hi = band.lowpass_enabled(nyquist) ? band.f_max : nyquist;

  Eigen::VectorXd taps(order + 1);
  const double i0_beta = bessel_i0(beta);
  for (int i = -half; i <= half; ++i) {
    const double r = static_cast<double>(i) / half;
    const double w = bessel_i0(beta * std::sqrt(1.0 - r * r)) / i0_beta;
    taps[i + half] = w * (ideal_lowpass(f_hi, sample_rate, i) -
                          ideal_lowpass(f_lo, sample_rate, i));
  }
  return taps;
}

AudioSignal bandpass(const AudioSignal& signal, const BandConfig& band) {
  validate(signal);
  const double nyquist = signal.nyquist();
  validate(band, nyquist);
  if (!band.highpass_enabled() && !band.lowpass_enabled(nyquist)) {
    return signal;
  }

  const Eigen::VectorXd taps = design_bandpass_fir(band, signal.sample_rate);
  const Eigen::Index half = (taps.size() - 1) / 2;
  const Eigen::VectorXd full = fft_convolve(signal.samples, taps);

  AudioSignal out;
  out.sample_rate = signal.sample_rate;
  out.samples = full.segment(half, signal.samples.size());
  return out;
}

}  // namespace sslens
