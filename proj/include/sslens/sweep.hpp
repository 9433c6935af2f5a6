#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sslens/bandpass.hpp"
#include "sslens/corpus.hpp"
#include "sslens/frontend.hpp"
#include "sslens/gmm.hpp"
#include "sslens/metrics.hpp"

namespace sslens {

// Knobs shared by the standalone baseline pipeline and every sweep cell.
struct PipelineConfig {
  FeatureKind frontend = FeatureKind::CqccLinear;
  int cqt_bins_per_octave = 96;
  int cqt_octaves = 9;
  double cqt_top_freq = 0.0;  // 0 -> Nyquist of the incoming audio
  double cqt_hop_ms = 16.0;
  LfccParams lfcc;
  TrainConfig train;
  bool filter_train = true;  // band-pass the training partition as well
  std::filesystem::path cache_dir;  // empty disables the feature cache
};

CqtParams cqt_params_for(const PipelineConfig& config, int sample_rate);

struct SweepConfig {
  double grid_step = 400.0;
  double f_low_limit = 0.0;
  double f_high_limit = 0.0;  // 0 -> Nyquist of the corpus audio
  PipelineConfig pipeline;
  std::filesystem::path out_dir;
  int workers = 1;
};

struct CellResult {
  BandConfig band;
  EerResult pooled;
  std::map<std::string, EerResult> per_attack;
  std::vector<ScoreRecord> scores;
};

// Extracts features for one utterance under a band, consulting the cache
// when configured. An open band (f_min = 0, f_max >= Nyquist) skips the
// filter. Cache writes are atomic (write then rename).
FeatureMatrix features_for(const ProtocolEntry& entry, const Corpus& corpus,
                           const BandConfig& band, const PipelineConfig& config);

// Grid edges from f_low_limit to f_high_limit inclusive; the step must
// divide the span.
std::vector<double> grid_edges(const SweepConfig& config, double nyquist);

// All (f_min, f_max) pairs with f_min < f_max, ordered f_max descending
// then f_min ascending, mirroring the heatmap rows.
std::vector<BandConfig> enumerate_bands(const SweepConfig& config,
                                        double nyquist);

// One experiment: filter the corpus, extract features, train bona fide and
// spoofed GMMs on the training partition, score the evaluation partition,
// and compute pooled and per-attack EERs.
CellResult run_cell(const BandConfig& band, const PipelineConfig& config,
                    const Corpus& corpus);

// Triangular EER grid; rows are f_max descending, columns f_min ascending,
// NaN marks invalid or missing cells. Top-left is the full band.
struct EerGrid {
  std::vector<double> edges;
  Eigen::MatrixXd cells;
  std::string attack_id;
  std::string frontend;

  double f_max_of_row(Eigen::Index r) const {
    return edges[edges.size() - 1 - static_cast<std::size_t>(r)];
  }
  double f_min_of_col(Eigen::Index c) const {
    return edges[static_cast<std::size_t>(c)];
  }
};

struct BandLess {
  bool operator()(const BandConfig& a, const BandConfig& b) const {
    if (a.f_min != b.f_min) return a.f_min < b.f_min;
    return a.f_max < b.f_max;
  }
};
using CellMap = std::map<BandConfig, EerResult, BandLess>;

EerGrid assemble_grid(const CellMap& cells, const std::vector<double>& edges,
                      const std::string& attack_id, const std::string& frontend);

// CSV: header row of f_min edges, first column of f_max edges, empty cells
// for invalid pairs; EERs as fractions with 17 significant digits.
void export_heatmap_csv(const EerGrid& grid, const std::filesystem::path& path);
EerGrid import_heatmap_csv(const std::filesystem::path& path);

// 24-bit BMP raster, fixed color scale 0-25% EER (blue to red), gray
// background outside the triangle.
void export_heatmap_image(const EerGrid& grid,
                          const std::filesystem::path& path,
                          int pixels_per_cell = 16);

// Full sweep: runs (or resumes) every cell, persisting per-cell artifacts
// under out_dir/<frontend>/<attack>/<fmin>-<fmax>/ and a manifest; returns
// per-attack cell maps keyed by attack id ("pooled" included).
std::map<std::string, CellMap> run_sweep(const SweepConfig& config,
                                         const Corpus& corpus);

}  // namespace sslens
