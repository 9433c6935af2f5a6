#pragma once

#include <filesystem>
#include <string>

#include "sslens/corpus.hpp"
#include "sslens/sweep.hpp"

namespace sslens {

// Flat key-value configuration with dotted keys, e.g.
//   cqt.bins_per_octave = 96
// Lines starting with '#' are comments. Flags override file values.
struct RunConfig {
  std::filesystem::path audio_dir;
  std::filesystem::path train_protocol;
  std::filesystem::path eval_protocol;
  SweepConfig sweep;  // carries the pipeline configuration
  std::filesystem::path out_dir = "out";

  Corpus load_corpus() const;
};

// Applies one dotted key; throws on unknown keys or bad values.
void apply_config_key(RunConfig& config, const std::string& key,
                      const std::string& value);

// Loads a config file, then applies the SSL_CACHE_DIR environment override
// if set.
RunConfig load_config(const std::filesystem::path& path);

RunConfig default_config();

}  // namespace sslens
