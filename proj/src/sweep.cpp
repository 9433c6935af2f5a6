#include "sslens/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "sslens/wav.hpp"

namespace sslens {

namespace fs = std::filesystem;
using nlohmann::json;

CqtParams cqt_params_for(const PipelineConfig& config, int sample_rate) {
  const double top = config.cqt_top_freq > 0.0 ? config.cqt_top_freq
                                               : 0.5 * sample_rate;
  CqtParams p = CqtParams::reduced(sample_rate, config.cqt_bins_per_octave,
                                   config.cqt_octaves, top);
  p.hop = static_cast<int>(std::lround(config.cqt_hop_ms * 1e-3 * sample_rate));
  return p;
}

namespace {

std::string band_tag(const BandConfig& band) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g-%g", band.f_min, band.f_max);
  return buf;
}

bool band_is_open(const BandConfig& band, double nyquist) {
  return !band.highpass_enabled() && !band.lowpass_enabled(nyquist);
}

FeatureMatrix extract(const AudioSignal& signal, const PipelineConfig& config) {
  switch (config.frontend) {
    case FeatureKind::CqccLinear:
      return cqcc_extract(signal, cqt_params_for(config, signal.sample_rate),
                          FrequencyScale::Linear);
    case FeatureKind::CqccGeometric:
      return cqcc_extract(signal, cqt_params_for(config, signal.sample_rate),
                          FrequencyScale::Geometric);
    case FeatureKind::Lfcc:
      return lfcc_extract(signal, config.lfcc);
  }
  throw std::invalid_argument("unknown front-end");
}

}  // namespace

FeatureMatrix features_for(const ProtocolEntry& entry, const Corpus& corpus,
                           const BandConfig& band,
                           const PipelineConfig& config) {
  fs::path cache_file;
  if (!config.cache_dir.empty()) {
    cache_file = config.cache_dir / to_string(config.frontend) /
                 band_tag(band) / (entry.utterance_id + ".sslf");
    if (fs::exists(cache_file)) {
      FeatureMatrix f = read_features(cache_file);
      f.utterance_id = entry.utterance_id;
      f.band = band_tag(band);
      return f;
    }
  }

  AudioSignal signal = corpus.load(entry);
  if (!band_is_open(band, signal.nyquist())) {
    signal = bandpass(signal, band);
  }
  FeatureMatrix f = extract(signal, config);
  f.utterance_id = entry.utterance_id;
  f.band = band_tag(band);

  if (!cache_file.empty()) {
    fs::create_directories(cache_file.parent_path());
    // Atomic publish: concurrent writers race benignly on the rename.
    const fs::path tmp =
        cache_file.string() + ".tmp." +
        std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    write_features(tmp, f);
    fs::rename(tmp, cache_file);
  }
  return f;
}

std::vector<double> grid_edges(const SweepConfig& config, double nyquist) {
  const double hi = config.f_high_limit > 0.0 ? config.f_high_limit : nyquist;
  const double span = hi - config.f_low_limit;
  if (config.grid_step <= 0.0) {
    throw std::invalid_argument("SweepConfig: grid_step must be positive");
  }
  const double steps = span / config.grid_step;
  const auto n = static_cast<long>(std::lround(steps));
  if (n < 1 || std::abs(steps - static_cast<double>(n)) > 1e-9) {
    throw std::invalid_argument("SweepConfig: grid_step must divide the span");
  }
  std::vector<double> edges(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) {
    edges[static_cast<std::size_t>(i)] =
        config.f_low_limit + static_cast<double>(i) * config.grid_step;
  }
  return edges;
}

std::vector<BandConfig> enumerate_bands(const SweepConfig& config,
                                        double nyquist) {
  const std::vector<double> edges = grid_edges(config, nyquist);
  std::vector<BandConfig> bands;
  for (std::size_t hi = edges.size(); hi-- > 1;) {
    for (std::size_t lo = 0; lo < hi; ++lo) {
      bands.push_back({edges[lo], edges[hi]});
    }
  }
  // f_max descending rows, f_min ascending within a row: reorder.
  std::stable_sort(bands.begin(), bands.end(),
                   [](const BandConfig& a, const BandConfig& b) {
                     if (a.f_max != b.f_max) return a.f_max > b.f_max;
                     return a.f_min < b.f_min;
                   });
  return bands;
}

CellResult run_cell(const BandConfig& band, const PipelineConfig& config,
                    const Corpus& corpus) {
  if (corpus.train.empty() || corpus.eval.empty()) {
    throw std::invalid_argument("run_cell: corpus needs train and eval entries");
  }
  const BandConfig open_band{0.0, 1e12};

  // Train the class models on (optionally filtered) training features.
  std::vector<Eigen::MatrixXd> bona_blocks, spoof_blocks;
  Eigen::Index bona_rows = 0, spoof_rows = 0, dim = 0;
  for (const auto& entry : corpus.train) {
    const FeatureMatrix f = features_for(
        entry, corpus, config.filter_train ? band : open_band, config);
    dim = f.frames.cols();
    if (entry.key == TrialKey::Bonafide) {
      bona_rows += f.frames.rows();
      bona_blocks.push_back(f.frames);
    } else {
      spoof_rows += f.frames.rows();
      spoof_blocks.push_back(f.frames);
    }
  }
  auto stack = [dim](const std::vector<Eigen::MatrixXd>& blocks,
                     Eigen::Index rows) {
    Eigen::MatrixXd all(rows, dim);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
      all.middleRows(at, b.rows()) = b;
      at += b.rows();
    }
    return all;
  };
  const GmmModel bona = gmm_train(stack(bona_blocks, bona_rows), config.train);
  const GmmModel spoof = gmm_train(stack(spoof_blocks, spoof_rows), config.train);

  CellResult result;
  result.band = band;
  for (const auto& entry : corpus.eval) {
    const FeatureMatrix f = features_for(entry, corpus, band, config);
    ScoreRecord r;
    r.utterance_id = entry.utterance_id;
    r.attack_id = entry.attack_id;
    r.key = entry.key;
    r.score = llr_score(bona, spoof, f);
    result.scores.push_back(std::move(r));
  }
  result.pooled = rocch_eer(result.scores);
  result.per_attack = per_attack_eer(result.scores);
  return result;
}

EerGrid assemble_grid(const CellMap& cells, const std::vector<double>& edges,
                      const std::string& attack_id,
                      const std::string& frontend) {
  const auto m = static_cast<Eigen::Index>(edges.size()) - 1;
  EerGrid grid;
  grid.edges = edges;
  grid.attack_id = attack_id;
  grid.frontend = frontend;
  grid.cells = Eigen::MatrixXd::Constant(
      m, m, std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) {
      const BandConfig band{grid.f_min_of_col(c), grid.f_max_of_row(r)};
      if (band.f_min >= band.f_max) continue;
      const auto it = cells.find(band);
      if (it != cells.end()) grid.cells(r, c) = it->second.eer;
    }
  }
  return grid;
}

void export_heatmap_csv(const EerGrid& grid, const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  char buf[64];
  os << "fmax\\fmin";
  const auto m = grid.cells.rows();
  for (Eigen::Index c = 0; c < m; ++c) {
    std::snprintf(buf, sizeof(buf), "%g", grid.f_min_of_col(c));
    os << ',' << buf;
  }
  os << '\n';
  for (Eigen::Index r = 0; r < m; ++r) {
    std::snprintf(buf, sizeof(buf), "%g", grid.f_max_of_row(r));
    os << buf;
    for (Eigen::Index c = 0; c < m; ++c) {
      os << ',';
      if (!std::isnan(grid.cells(r, c))) {
        std::snprintf(buf, sizeof(buf), "%.17g", grid.cells(r, c));
        os << buf;
      }
    }
    os << '\n';
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

EerGrid import_heatmap_csv(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line)) {
    throw std::runtime_error(path.string() + ": empty heatmap CSV");
  }
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = s.find(',', start);
      out.push_back(s.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  };
  const auto header = split(line);
  const auto m = static_cast<Eigen::Index>(header.size()) - 1;

  EerGrid grid;
  grid.cells = Eigen::MatrixXd::Constant(
      m, m, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> fmin(static_cast<std::size_t>(m));
  for (Eigen::Index c = 0; c < m; ++c) {
    fmin[static_cast<std::size_t>(c)] =
        std::stod(header[static_cast<std::size_t>(c) + 1]);
  }
  double top_fmax = 0.0;
  for (Eigen::Index r = 0; r < m; ++r) {
    if (!std::getline(is, line)) {
      throw std::runtime_error(path.string() + ": truncated heatmap CSV");
    }
    const auto fields = split(line);
    if (static_cast<Eigen::Index>(fields.size()) != m + 1) {
      throw std::runtime_error(path.string() + ": ragged heatmap CSV row");
    }
    if (r == 0) top_fmax = std::stod(fields[0]);
    for (Eigen::Index c = 0; c < m; ++c) {
      const std::string& cell = fields[static_cast<std::size_t>(c) + 1];
      if (!cell.empty()) grid.cells(r, c) = std::stod(cell);
    }
  }
  grid.edges = fmin;
  grid.edges.push_back(top_fmax);
  return grid;
}

namespace {

// Jet-style blue-to-red ramp over [0, 1].
void eer_color(double t, unsigned char rgb[3]) {
  t = std::clamp(t, 0.0, 1.0);
  const double r = std::clamp(1.5 - std::abs(4.0 * t - 3.0), 0.0, 1.0);
  const double g = std::clamp(1.5 - std::abs(4.0 * t - 2.0), 0.0, 1.0);
  const double b = std::clamp(1.5 - std::abs(4.0 * t - 1.0), 0.0, 1.0);
  rgb[0] = static_cast<unsigned char>(255.0 * r);
  rgb[1] = static_cast<unsigned char>(255.0 * g);
  rgb[2] = static_cast<unsigned char>(255.0 * b);
}

}  // namespace

void export_heatmap_image(const EerGrid& grid, const fs::path& path,
                          int pixels_per_cell) {
  constexpr double kScaleMax = 0.25;  // saturate at 25% EER
  const auto m = grid.cells.rows();
  const int w = static_cast<int>(m) * pixels_per_cell;
  const int h = w;
  const int row_bytes = (3 * w + 3) & ~3;

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  const std::uint32_t data_size = static_cast<std::uint32_t>(row_bytes) * h;
  const std::uint32_t file_size = 54 + data_size;
  unsigned char header[54] = {'B', 'M'};
  auto put32 = [&](int off, std::uint32_t v) {
    header[off] = v & 0xFF; header[off + 1] = (v >> 8) & 0xFF;
    header[off + 2] = (v >> 16) & 0xFF; header[off + 3] = (v >> 24) & 0xFF;
  };
  put32(2, file_size);
  put32(10, 54);
  put32(14, 40);
  put32(18, static_cast<std::uint32_t>(w));
  put32(22, static_cast<std::uint32_t>(h));
  header[26] = 1;
  header[28] = 24;
  put32(34, data_size);
  os.write(reinterpret_cast<const char*>(header), 54);

  std::vector<unsigned char> row(static_cast<std::size_t>(row_bytes), 0);
  for (int y = h - 1; y >= 0; --y) {  // BMP rows are bottom-up
    const Eigen::Index r = y / pixels_per_cell;
    for (int x = 0; x < w; ++x) {
      const Eigen::Index c = x / pixels_per_cell;
      unsigned char rgb[3] = {230, 230, 230};  // background
      if (!std::isnan(grid.cells(r, c))) {
        eer_color(grid.cells(r, c) / kScaleMax, rgb);
      }
      row[static_cast<std::size_t>(3 * x)] = rgb[2];
      row[static_cast<std::size_t>(3 * x) + 1] = rgb[1];
      row[static_cast<std::size_t>(3 * x) + 2] = rgb[0];
    }
    os.write(reinterpret_cast<const char*>(row.data()), row_bytes);
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

namespace {

json eer_to_json(const EerResult& r) {
  return json{{"eer", r.eer},
              {"threshold", r.threshold},
              {"num_bonafide", r.num_bonafide},
              {"num_spoof", r.num_spoof}};
}

EerResult eer_from_json(const json& j) {
  EerResult r;
  r.eer = j.at("eer").get<double>();
  r.threshold = j.at("threshold").get<double>();
  r.num_bonafide = j.at("num_bonafide").get<std::size_t>();
  r.num_spoof = j.at("num_spoof").get<std::size_t>();
  return r;
}

void write_eer_txt(const fs::path& path, const EerResult& r) {
  std::ofstream os(path);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", r.eer);
  os << "eer " << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g", r.threshold);
  os << "threshold " << buf << '\n';
  os << "num_bonafide " << r.num_bonafide << '\n';
  os << "num_spoof " << r.num_spoof << '\n';
}

std::vector<ScoreRecord> filter_attack(const std::vector<ScoreRecord>& scores,
                                       const std::string& attack) {
  std::vector<ScoreRecord> out;
  for (const auto& s : scores) {
    if (s.key == TrialKey::Bonafide || s.attack_id == attack ||
        attack == "pooled") {
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace

std::map<std::string, CellMap> run_sweep(const SweepConfig& config,
                                         const Corpus& corpus) {
  if (corpus.eval.empty()) {
    throw std::invalid_argument("run_sweep: empty evaluation partition");
  }
  const double nyquist =
      0.5 * read_wav(corpus.wav_path(corpus.eval.front())).sample_rate;
  const std::vector<BandConfig> bands = enumerate_bands(config, nyquist);
  const std::string frontend = to_string(config.pipeline.frontend);
  const fs::path cell_dir = config.out_dir / frontend / "cells";
  fs::create_directories(cell_dir);

  std::mutex mu;
  std::map<std::string, CellMap> results;
  json manifest_cells = json::array();

  auto record = [&](const BandConfig& band, const json& cell_json,
                    const std::string& status) {
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& [attack, eer_json] : cell_json.items()) {
      results[attack][band] = eer_from_json(eer_json);
    }
    manifest_cells.push_back(json{{"f_min", band.f_min},
                                  {"f_max", band.f_max},
                                  {"status", status}});
  };

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= bands.size()) return;
      const BandConfig& band = bands[i];
      const fs::path marker = cell_dir / (band_tag(band) + ".json");
      try {
        if (fs::exists(marker)) {
          std::ifstream is(marker);
          json cell_json = json::parse(is);
          record(band, cell_json, "cached");
          continue;
        }
        const CellResult cell = run_cell(band, config.pipeline, corpus);

        json cell_json;
        cell_json["pooled"] = eer_to_json(cell.pooled);
        for (const auto& [attack, eer] : cell.per_attack) {
          cell_json[attack] = eer_to_json(eer);
        }
        // Per-attack artifacts, plus the pooled set.
        std::vector<std::string> attacks{"pooled"};
        for (const auto& [attack, eer] : cell.per_attack) attacks.push_back(attack);
        for (const auto& attack : attacks) {
          const fs::path dir =
              config.out_dir / frontend / attack / band_tag(band);
          fs::create_directories(dir);
          write_scores(dir / "scores.tsv", filter_attack(cell.scores, attack));
          write_eer_txt(dir / "eer.txt",
                        attack == "pooled" ? cell.pooled
                                           : cell.per_attack.at(attack));
        }
        const fs::path tmp = marker.string() + ".tmp";
        {
          std::ofstream os(tmp);
          os << cell_json.dump(2) << '\n';
        }
        fs::rename(tmp, marker);
        record(band, cell_json, "done");
      } catch (const std::exception& e) {
        // A failed cell leaves an error marker rather than vanishing.
        std::lock_guard<std::mutex> lock(mu);
        manifest_cells.push_back(json{{"f_min", band.f_min},
                                      {"f_max", band.f_max},
                                      {"status", "error"},
                                      {"error", e.what()}});
        if (!failed.exchange(true)) first_error = e.what();
      }
    }
  };

  const int workers = std::max(1, config.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  json manifest;
  manifest["frontend"] = frontend;
  manifest["grid_step"] = config.grid_step;
  manifest["num_cells"] = bands.size();
  manifest["cells"] = manifest_cells;
  {
    std::ofstream os(config.out_dir / frontend / "manifest.json");
    os << manifest.dump(2) << '\n';
  }
  if (failed) {
    std::cerr << "sweep: at least one cell failed: " << first_error << "\n";
  }
  return results;
}

}  // namespace sslens
