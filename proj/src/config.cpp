#include "sslens/config.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace sslens {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected boolean, got '" + v + "'");
}

}  // namespace

Corpus RunConfig::load_corpus() const {
  Corpus corpus;
  corpus.audio_dir = audio_dir;
  corpus.train = parse_protocol(train_protocol, Partition::Train);
  corpus.eval = parse_protocol(eval_protocol, Partition::Eval);
  return corpus;
}

void apply_config_key(RunConfig& c, const std::string& key,
                      const std::string& value) {
  PipelineConfig& p = c.sweep.pipeline;
  try {
    if (key == "corpus.audio_dir") c.audio_dir = value;
    else if (key == "corpus.train_protocol") c.train_protocol = value;
    else if (key == "corpus.eval_protocol") c.eval_protocol = value;
    else if (key == "out_dir") c.out_dir = value;
    else if (key == "cache_dir") p.cache_dir = value;
    else if (key == "frontend") p.frontend = feature_kind_from_string(value);
    else if (key == "cqt.bins_per_octave") p.cqt_bins_per_octave = std::stoi(value);
    else if (key == "cqt.octaves") p.cqt_octaves = std::stoi(value);
    else if (key == "cqt.top_freq") p.cqt_top_freq = std::stod(value);
    else if (key == "cqt.hop_ms") p.cqt_hop_ms = std::stod(value);
    else if (key == "lfcc.window_ms") p.lfcc.window_seconds = std::stod(value) * 1e-3;
    else if (key == "lfcc.hop_ms") p.lfcc.hop_seconds = std::stod(value) * 1e-3;
    else if (key == "lfcc.fft_size") p.lfcc.fft_size = std::stoi(value);
    else if (key == "lfcc.num_filters") p.lfcc.num_filters = std::stoi(value);
    else if (key == "gmm.num_components") p.train.num_components = std::stoi(value);
    else if (key == "gmm.max_iters") p.train.max_iters = std::stoi(value);
    else if (key == "gmm.tol") p.train.tol = std::stod(value);
    else if (key == "gmm.variance_floor_factor")
      p.train.variance_floor_factor = std::stod(value);
    else if (key == "seed") p.train.seed = std::stoull(value);
    else if (key == "sweep.step") c.sweep.grid_step = std::stod(value);
    else if (key == "sweep.f_low") c.sweep.f_low_limit = std::stod(value);
    else if (key == "sweep.f_high") c.sweep.f_high_limit = std::stod(value);
    else if (key == "sweep.workers") c.sweep.workers = std::stoi(value);
    else if (key == "sweep.filter_train") p.filter_train = parse_bool(value);
    else
      throw std::invalid_argument("unknown config key '" + key + "'");
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad value '" + value + "' for key '" + key +
                                "'");
  }
}

RunConfig default_config() {
  RunConfig c;
  if (const char* cache = std::getenv("SSL_CACHE_DIR")) {
    c.sweep.pipeline.cache_dir = cache;
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open config file " + path.string());
  }
  RunConfig c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected key = value");
    }
    apply_config_key(c, trim(stripped.substr(0, eq)),
                     trim(stripped.substr(eq + 1)));
  }
  if (const char* cache = std::getenv("SSL_CACHE_DIR")) {
    c.sweep.pipeline.cache_dir = cache;
  }
  // Referenced paths must exist when configured.
  for (const auto& p : {c.audio_dir, c.train_protocol, c.eval_protocol}) {
    if (!p.empty() && !std::filesystem::exists(p)) {
      throw std::runtime_error("configured path does not exist: " + p.string());
    }
  }
  return c;
}

}  // namespace sslens
