#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sslens/audio.hpp"
#include "sslens/metrics.hpp"

namespace sslens {

enum class Partition { Train, Dev, Eval };

std::string to_string(Partition p);

struct ProtocolEntry {
  std::string speaker_id;
  std::string utterance_id;
  std::string attack_id;  // "bonafide" for genuine trials
  TrialKey key = TrialKey::Spoof;
  Partition partition = Partition::Train;
};

// Whitespace-separated lines `speaker utterance - system key`, where key is
// `bonafide` or `spoof` and a bonafide system id of `-` is normalized to
// attack_id "bonafide". Malformed lines raise an error naming the line.
std::vector<ProtocolEntry> parse_protocol(const std::filesystem::path& path,
                                          Partition partition);

// A corpus is an audio directory plus train/eval protocol entries.
struct Corpus {
  std::filesystem::path audio_dir;
  std::vector<ProtocolEntry> train;
  std::vector<ProtocolEntry> eval;

  std::filesystem::path wav_path(const ProtocolEntry& e) const {
    return audio_dir / (e.utterance_id + ".wav");
  }
  AudioSignal load(const ProtocolEntry& e) const;
};

}  // namespace sslens
