#pragma once

#include <Eigen/Core>

namespace sslens {

// Mono PCM audio, samples in [-1, 1].
struct AudioSignal {
  Eigen::VectorXd samples;
  int sample_rate = 0;

  double nyquist() const { return 0.5 * sample_rate; }
  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Throws std::invalid_argument on empty signals, non-finite samples or a
// non-positive sample rate.
void validate(const AudioSignal& signal);

}  // namespace sslens
