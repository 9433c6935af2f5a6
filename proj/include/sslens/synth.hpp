#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "sslens/audio.hpp"
#include "sslens/corpus.hpp"

namespace sslens {

// Synthetic validation corpora: both classes share a randomly shaped noise
// spectrum and differ only inside a narrow artefact band, where the spoof
// class carries more energy.
struct SynthSpec {
  int sample_rate = 16000;
  double duration_seconds = 2.0;
  // Shared spectrum support.
  double shared_low_hz = 50.0;
  double shared_high_hz = 7550.0;
  // Artefact band; classes are identical outside it.
  double artefact_low_hz = 7600.0;
  double artefact_high_hz = 8000.0;
  // Artefact level relative to the shared spectral density, and the extra
  // level the spoof class carries.
  double artefact_db = -28.0;
  double spoof_extra_db = 10.0;
  std::string attack_id = "A91";

  // Classes identical below 7.6 kHz, differing above.
  static SynthSpec highband(int sample_rate = 16000);
  // Classes identical above 800 Hz, differing below.
  static SynthSpec lowband(int sample_rate = 16000);
};

// One synthetic utterance; the id seeds the generator, so regeneration is
// reproducible per utterance.
AudioSignal synth_utterance(const SynthSpec& spec, TrialKey key,
                            std::uint64_t seed);

// Writes WAV files plus train/eval protocol files under `out_dir`
// (audio/, train.txt, eval.txt). `per_class` counts utterances per class
// per partition. Returns the corpus description.
Corpus generate_corpus(const SynthSpec& spec, const std::filesystem::path& out_dir,
                       int per_class, std::uint64_t seed);

}  // namespace sslens
