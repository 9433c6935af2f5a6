#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sslens {

enum class TrialKey { Bonafide, Spoof };

struct ScoreRecord {
  std::string utterance_id;
  std::string attack_id;  // "bonafide" or an attack label such as "A07"
  TrialKey key = TrialKey::Spoof;
  double score = 0.0;
};

struct EerResult {
  double eer = 0.0;        // fraction
  double threshold = 0.0;  // score at the crossing
  std::size_t num_bonafide = 0;
  std::size_t num_spoof = 0;
};

// Equal error rate at the miss = false-alarm crossing of the empirical ROC
// operating-point curve (ties processed as a single step), interpolating
// linearly along the segment containing the crossing. Higher scores mean
// more bona fide. Throws on single-class input.
EerResult rocch_eer(const std::vector<ScoreRecord>& records);

// Per-attack EERs: all bonafide records against each attack's spoof
// records. Attacks with zero trials are omitted.
std::map<std::string, EerResult> per_attack_eer(
    const std::vector<ScoreRecord>& records);

// Tab-separated `utterance_id attack_id key score`; scores serialized with
// 17 significant digits so round-trips are bit-exact.
void write_scores(const std::filesystem::path& path,
                  const std::vector<ScoreRecord>& records);
std::vector<ScoreRecord> read_scores(const std::filesystem::path& path);

}  // namespace sslens
