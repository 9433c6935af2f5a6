#include "sslens/audio.hpp"

#include <stdexcept>

namespace sslens {

void validate(const AudioSignal& signal) {
  if (signal.sample_rate <= 0) {
    throw std::invalid_argument("AudioSignal: sample_rate must be positive");
  }
  if (signal.samples.size() == 0) {
    throw std::invalid_argument("AudioSignal: empty signal");
  }
  if (!signal.samples.allFinite()) {
    throw std::invalid_argument("AudioSignal: non-finite sample");
  }
}

}  // namespace sslens
