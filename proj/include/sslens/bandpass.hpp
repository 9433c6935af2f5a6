#pragma once

#include <Eigen/Core>

#include "sslens/audio.hpp"

namespace sslens {

// Band-pass edges: f_min is the high-pass cut-in, f_max the low-pass
// cut-off. f_min = 0 disables the high-pass stage; f_max = Nyquist the
// low-pass stage.
struct BandConfig {
  double f_min = 0.0;
  double f_max = 0.0;

  bool highpass_enabled() const { return f_min > 0.0; }
  bool lowpass_enabled(double nyquist) const { return f_max < nyquist; }
};

void validate(const BandConfig& band, double nyquist);

// Kaiser-window linear-phase FIR band-pass taps: >= 60 dB stopband,
// 100 Hz transition width, odd length.
Eigen::VectorXd design_bandpass_fir(const BandConfig& band, int sample_rate);

// Applies the FIR with group-delay compensation; output length equals
// input length. A fully open band returns the input unchanged.
AudioSignal bandpass(const AudioSignal& signal, const BandConfig& band);

}  // namespace sslens
