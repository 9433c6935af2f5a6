#include "sslens/corpus.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sslens/wav.hpp"

namespace sslens {

std::string to_string(Partition p) {
  switch (p) {
    case Partition::Train: return "train";
    case Partition::Dev: return "dev";
    case Partition::Eval: return "eval";
  }
  throw std::invalid_argument("unknown Partition");
}

std::vector<ProtocolEntry> parse_protocol(const std::filesystem::path& path,
                                          Partition partition) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open protocol " + path.string());
  std::vector<ProtocolEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string speaker, utt, dash, system, key, extra;
    if (!(ls >> speaker >> utt >> dash >> system >> key)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected 5 fields");
    }
    if (ls >> extra) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": trailing field '" + extra + "'");
    }
    ProtocolEntry e;
    e.speaker_id = speaker;
    e.utterance_id = utt;
    e.partition = partition;
    if (key == "bonafide") {
      e.key = TrialKey::Bonafide;
      e.attack_id = "bonafide";
    } else if (key == "spoof") {
      e.key = TrialKey::Spoof;
      e.attack_id = system;
    } else {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": unknown key token '" + key + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

AudioSignal Corpus::load(const ProtocolEntry& e) const {
  return read_wav(wav_path(e));
}

}  // namespace sslens
