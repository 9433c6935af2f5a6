#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>

#include "sslens/sweep.hpp"
#include "sslens/synth.hpp"

using namespace sslens;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("sslens_sweep_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

SweepConfig tiny_sweep() {
  SweepConfig cfg;
  cfg.grid_step = 4000.0;
  return cfg;
}

}  // namespace

TEST_CASE("grid edges require a dividing step") {
  SweepConfig cfg = tiny_sweep();
  const auto edges = grid_edges(cfg, 8000.0);
  REQUIRE(edges.size() == 3);
  CHECK(edges[0] == 0.0);
  CHECK(edges[1] == 4000.0);
  CHECK(edges[2] == 8000.0);
  cfg.grid_step = 3000.0;
  CHECK_THROWS_AS(grid_edges(cfg, 8000.0), std::invalid_argument);
}

TEST_CASE("default grid at 16 kHz has 210 bands") {
  SweepConfig cfg;
  cfg.grid_step = 400.0;
  const auto edges = grid_edges(cfg, 8000.0);
  CHECK(edges.size() == 21);
  const auto bands = enumerate_bands(cfg, 8000.0);
  CHECK(bands.size() == 210);  // 21 choose 2
}

TEST_CASE("bands are ordered f_max descending then f_min ascending") {
  const SweepConfig cfg = tiny_sweep();
  const auto bands = enumerate_bands(cfg, 8000.0);
  REQUIRE(bands.size() == 3);
  CHECK(bands[0].f_min == 0.0);
  CHECK(bands[0].f_max == 8000.0);
  CHECK(bands[1].f_min == 4000.0);
  CHECK(bands[1].f_max == 8000.0);
  CHECK(bands[2].f_min == 0.0);
  CHECK(bands[2].f_max == 4000.0);
}

TEST_CASE("grid assembly puts the full band at the top-left") {
  const std::vector<double> edges{0.0, 4000.0, 8000.0};
  CellMap cells;
  cells[{0.0, 8000.0}] = EerResult{0.10, 0.0, 1, 1};
  cells[{4000.0, 8000.0}] = EerResult{0.20, 0.0, 1, 1};
  cells[{0.0, 4000.0}] = EerResult{0.30, 0.0, 1, 1};
  const EerGrid grid = assemble_grid(cells, edges, "pooled", "lfcc");
  REQUIRE(grid.cells.rows() == 2);
  REQUIRE(grid.cells.cols() == 2);
  // Row 0 is the highest f_max, column 0 the lowest f_min.
  CHECK(grid.f_max_of_row(0) == 8000.0);
  CHECK(grid.f_min_of_col(0) == 0.0);
  CHECK(grid.cells(0, 0) == 0.10);
  CHECK(grid.cells(0, 1) == 0.20);
  CHECK(grid.cells(1, 0) == 0.30);
  // f_min = 4000, f_max = 4000 is not a band.
  CHECK(std::isnan(grid.cells(1, 1)));
}

TEST_CASE("heatmap csv round-trip is bit-exact") {
  TempDir tmp("csv");
  const std::vector<double> edges{0.0, 4000.0, 8000.0};
  CellMap cells;
  cells[{0.0, 8000.0}] = EerResult{1.0 / 3.0, 0.0, 1, 1};
  cells[{4000.0, 8000.0}] = EerResult{0.05 + 1e-17, 0.0, 1, 1};
  cells[{0.0, 4000.0}] = EerResult{0.0, 0.0, 1, 1};
  const EerGrid grid = assemble_grid(cells, edges, "A91", "cqcc-linear");
  const fs::path path = tmp.path / "grid.csv";
  export_heatmap_csv(grid, path);
  const EerGrid back = import_heatmap_csv(path);
  REQUIRE(back.edges == grid.edges);
  REQUIRE(back.cells.rows() == grid.cells.rows());
  REQUIRE(back.cells.cols() == grid.cells.cols());
  for (Eigen::Index r = 0; r < grid.cells.rows(); ++r) {
    for (Eigen::Index c = 0; c < grid.cells.cols(); ++c) {
      if (std::isnan(grid.cells(r, c))) {
        CHECK(std::isnan(back.cells(r, c)));
      } else {
        CHECK(back.cells(r, c) == grid.cells(r, c));
      }
    }
  }
}

TEST_CASE("heatmap image writes a valid bmp") {
  TempDir tmp("bmp");
  const std::vector<double> edges{0.0, 4000.0, 8000.0};
  CellMap cells;
  cells[{0.0, 8000.0}] = EerResult{0.02, 0.0, 1, 1};
  cells[{4000.0, 8000.0}] = EerResult{0.40, 0.0, 1, 1};  // above scale, clamps
  cells[{0.0, 4000.0}] = EerResult{0.12, 0.0, 1, 1};
  const EerGrid grid = assemble_grid(cells, edges, "pooled", "lfcc");
  const fs::path path = tmp.path / "grid.bmp";
  export_heatmap_image(grid, path, 4);
  REQUIRE(fs::exists(path));
  std::ifstream in(path, std::ios::binary);
  char magic[2];
  in.read(magic, 2);
  CHECK(magic[0] == 'B');
  CHECK(magic[1] == 'M');
  // 2x2 cells at 4 px per cell, 3 bytes per pixel, rows padded to 4 bytes:
  // headers (54) + 8 rows * 24 bytes.
  CHECK(fs::file_size(path) == 54 + 8 * 24);
}

TEST_CASE("feature cache round-trips through features_for") {
  TempDir tmp("cache");
  SynthSpec spec = SynthSpec::highband();
  spec.duration_seconds = 1.0;
  const Corpus corpus = generate_corpus(spec, tmp.path / "corpus", 2, 5);

  PipelineConfig cfg;
  cfg.frontend = FeatureKind::Lfcc;
  cfg.cache_dir = tmp.path / "cache";

  const BandConfig band{400.0, 7600.0};
  const FeatureMatrix cold = features_for(corpus.train[0], corpus, band, cfg);
  REQUIRE(fs::exists(cfg.cache_dir));
  const FeatureMatrix warm = features_for(corpus.train[0], corpus, band, cfg);
  CHECK((cold.frames - warm.frames).cwiseAbs().maxCoeff() == 0.0);
  CHECK(warm.feature_kind == cold.feature_kind);
}

TEST_CASE("a small cell runs end to end") {
  TempDir tmp("cell");
  SynthSpec spec = SynthSpec::highband();
  spec.duration_seconds = 1.0;
  const Corpus corpus = generate_corpus(spec, tmp.path / "corpus", 6, 11);

  PipelineConfig cfg;
  cfg.frontend = FeatureKind::Lfcc;
  cfg.train.num_components = 2;
  cfg.train.max_iters = 5;

  const CellResult result = run_cell({0.0, 8000.0}, cfg, corpus);
  CHECK(result.scores.size() == corpus.eval.size());
  CHECK(result.pooled.num_bonafide == 6);
  CHECK(result.pooled.num_spoof == 6);
  CHECK(result.pooled.eer >= 0.0);
  CHECK(result.pooled.eer <= 1.0);
  CHECK(result.per_attack.count(spec.attack_id) == 1);
  for (const ScoreRecord& r : result.scores) {
    CHECK(std::isfinite(r.score));
  }
}
