#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sslens/config.hpp"
#include "sslens/gmm.hpp"
#include "sslens/metrics.hpp"
#include "sslens/sweep.hpp"
#include "sslens/synth.hpp"

namespace fs = std::filesystem;
using namespace sslens;

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
};

RunConfig resolve_config(const CommonOpts& opts) {
  RunConfig cfg =
      opts.config_path.empty() ? default_config() : load_config(opts.config_path);
  for (const auto& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    }
    apply_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

BandConfig band_or_open(double fmin, double fmax) {
  return BandConfig{fmin, fmax > 0.0 ? fmax : 1e12};
}

void print_eer_table(const std::vector<ScoreRecord>& scores) {
  const EerResult pooled = rocch_eer(scores);
  const auto per_attack = per_attack_eer(scores);
  std::printf("%-10s", "attack");
  for (const auto& [attack, eer] : per_attack) std::printf("%10s", attack.c_str());
  std::printf("%10s\n", "pooled");
  std::printf("%-10s", "eer%");
  for (const auto& [attack, eer] : per_attack) std::printf("%10.2f", 100.0 * eer.eer);
  std::printf("%10.2f\n", 100.0 * pooled.eer);
}

CellMap read_cell_maps(const fs::path& cells_dir, const std::string& attack) {
  CellMap cells;
  if (!fs::is_directory(cells_dir)) {
    throw std::runtime_error("no sweep cell results under " + cells_dir.string());
  }
  for (const auto& entry : fs::directory_iterator(cells_dir)) {
    if (entry.path().extension() != ".json") continue;
    const std::string stem = entry.path().stem().string();
    const auto dash = stem.find('-');
    if (dash == std::string::npos) continue;
    BandConfig band{std::stod(stem.substr(0, dash)),
                    std::stod(stem.substr(dash + 1))};
    std::ifstream is(entry.path());
    const auto j = nlohmann::json::parse(is);
    if (!j.contains(attack)) continue;
    EerResult r;
    r.eer = j.at(attack).at("eer").get<double>();
    r.threshold = j.at(attack).at("threshold").get<double>();
    r.num_bonafide = j.at(attack).at("num_bonafide").get<std::size_t>();
    r.num_spoof = j.at(attack).at("num_spoof").get<std::size_t>();
    cells[band] = r;
  }
  if (cells.empty()) {
    throw std::runtime_error("no cell results for attack '" + attack + "'");
  }
  return cells;
}

std::vector<double> edges_from_cells(const CellMap& cells) {
  std::vector<double> edges;
  for (const auto& [band, eer] : cells) {
    edges.push_back(band.f_min);
    edges.push_back(band.f_max);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cepstral anti-spoofing front-ends, GMM back-end, and sub-band "
               "EER sweeps"};
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--config", common.config_path, "configuration file");
  app.add_option("--set", common.overrides,
                 "override a config key, e.g. --set gmm.num_components=64");

  // synth
  auto* synth_cmd = app.add_subcommand(
      "synth", "generate a synthetic validation corpus");
  std::string synth_kind = "highband";
  std::string synth_out;
  int per_class = 500;
  std::uint64_t synth_seed = 1;
  synth_cmd->add_option("--kind", synth_kind, "highband or lowband")
      ->check(CLI::IsMember({"highband", "lowband"}));
  synth_cmd->add_option("--out", synth_out, "output directory")->required();
  synth_cmd->add_option("--per-class", per_class,
                        "utterances per class per partition");
  synth_cmd->add_option("--seed", synth_seed, "corpus seed");

  // extract / train / score share band flags
  double fmin = 0.0, fmax = 0.0;
  auto* extract_cmd =
      app.add_subcommand("extract", "extract features for a partition");
  std::string partition = "eval";
  extract_cmd->add_option("--partition", partition)
      ->check(CLI::IsMember({"train", "eval"}));
  extract_cmd->add_option("--fmin", fmin, "band-pass cut-in (Hz)");
  extract_cmd->add_option("--fmax", fmax, "band-pass cut-off (Hz; 0 = Nyquist)");

  auto* train_cmd =
      app.add_subcommand("train", "train bona fide and spoofed GMMs");
  train_cmd->add_option("--fmin", fmin);
  train_cmd->add_option("--fmax", fmax);

  auto* score_cmd = app.add_subcommand("score", "score the eval partition");
  score_cmd->add_option("--fmin", fmin);
  score_cmd->add_option("--fmax", fmax);

  auto* eer_cmd = app.add_subcommand("eer", "pooled and per-attack EER table");
  std::string scores_path;
  eer_cmd->add_option("--scores", scores_path, "score file (TSV)");

  auto* sweep_cmd =
      app.add_subcommand("sweep", "run the full band-pass sweep grid");
  double step_override = 0.0;
  sweep_cmd->add_option("--step", step_override, "grid step in Hz");

  auto* heatmap_cmd = app.add_subcommand(
      "heatmap", "assemble CSV and image heatmaps from sweep cell results");
  std::string heatmap_attack = "pooled";
  heatmap_cmd->add_option("--attack", heatmap_attack);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) {
      const SynthSpec spec = synth_kind == "highband" ? SynthSpec::highband()
                                                      : SynthSpec::lowband();
      generate_corpus(spec, synth_out, per_class, synth_seed);
      std::cout << "wrote " << 4 * per_class << " utterances under "
                << synth_out << "\n";
      return 0;
    }

    RunConfig cfg = resolve_config(common);
    PipelineConfig& pipe = cfg.sweep.pipeline;

    if (extract_cmd->parsed()) {
      if (pipe.cache_dir.empty()) pipe.cache_dir = cfg.out_dir / "features";
      const Corpus corpus = cfg.load_corpus();
      const auto& entries =
          partition == "train" ? corpus.train : corpus.eval;
      const BandConfig band = band_or_open(fmin, fmax);
      for (const auto& e : entries) features_for(e, corpus, band, pipe);
      std::cout << "extracted " << entries.size() << " " << partition
                << " utterances to " << pipe.cache_dir << "\n";
      return 0;
    }

    if (train_cmd->parsed() || score_cmd->parsed()) {
      const Corpus corpus = cfg.load_corpus();
      const BandConfig band = band_or_open(fmin, fmax);
      fs::create_directories(cfg.out_dir);
      if (train_cmd->parsed()) {
        std::vector<Eigen::MatrixXd> bona, spoof;
        Eigen::Index nb = 0, ns = 0, dim = 0;
        for (const auto& e : corpus.train) {
          FeatureMatrix f = features_for(
              e, corpus, pipe.filter_train ? band : band_or_open(0, 0), pipe);
          dim = f.frames.cols();
          auto& dst = e.key == TrialKey::Bonafide ? bona : spoof;
          (e.key == TrialKey::Bonafide ? nb : ns) += f.frames.rows();
          dst.push_back(std::move(f.frames));
        }
        auto stack = [dim](std::vector<Eigen::MatrixXd>& blocks,
                           Eigen::Index rows) {
          Eigen::MatrixXd all(rows, dim);
          Eigen::Index at = 0;
          for (auto& b : blocks) {
            all.middleRows(at, b.rows()) = b;
            at += b.rows();
          }
          return all;
        };
        write_gmm(cfg.out_dir / "bona.gmm", gmm_train(stack(bona, nb), pipe.train));
        write_gmm(cfg.out_dir / "spoof.gmm", gmm_train(stack(spoof, ns), pipe.train));
        std::cout << "wrote " << (cfg.out_dir / "bona.gmm").string() << " and "
                  << (cfg.out_dir / "spoof.gmm").string() << "\n";
      } else {
        const GmmModel bona = read_gmm(cfg.out_dir / "bona.gmm");
        const GmmModel spoof = read_gmm(cfg.out_dir / "spoof.gmm");
        std::vector<ScoreRecord> scores;
        for (const auto& e : corpus.eval) {
          const FeatureMatrix f = features_for(e, corpus, band, pipe);
          scores.push_back(
              {e.utterance_id, e.attack_id, e.key, llr_score(bona, spoof, f)});
        }
        write_scores(cfg.out_dir / "scores.tsv", scores);
        std::cout << "wrote " << (cfg.out_dir / "scores.tsv").string() << "\n";
      }
      return 0;
    }

    if (eer_cmd->parsed()) {
      const fs::path path =
          scores_path.empty() ? cfg.out_dir / "scores.tsv" : fs::path(scores_path);
      print_eer_table(read_scores(path));
      return 0;
    }

    if (sweep_cmd->parsed()) {
      if (step_override > 0.0) cfg.sweep.grid_step = step_override;
      cfg.sweep.out_dir = cfg.out_dir;
      const Corpus corpus = cfg.load_corpus();
      const auto results = run_sweep(cfg.sweep, corpus);
      std::cout << "sweep complete: "
                << (results.count("pooled") ? results.at("pooled").size() : 0)
                << " cells under " << cfg.out_dir.string() << "\n";
      return 0;
    }

    if (heatmap_cmd->parsed()) {
      const std::string frontend = to_string(pipe.frontend);
      const CellMap cells =
          read_cell_maps(cfg.out_dir / frontend / "cells", heatmap_attack);
      const EerGrid grid = assemble_grid(cells, edges_from_cells(cells),
                                         heatmap_attack, frontend);
      const fs::path base = cfg.out_dir / frontend / (heatmap_attack + "_heatmap");
      export_heatmap_csv(grid, base.string() + ".csv");
      export_heatmap_image(grid, base.string() + ".bmp");
      std::cout << "wrote " << base.string() << ".csv and .bmp\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
