#include "sslens/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sslens {

EerResult rocch_eer(const std::vector<ScoreRecord>& records) {
  std::vector<double> bona, spoof;
  for (const auto& r : records) {
    if (!std::isfinite(r.score)) {
      throw std::invalid_argument("rocch_eer: non-finite score for " +
                                  r.utterance_id);
    }
    (r.key == TrialKey::Bonafide ? bona : spoof).push_back(r.score);
  }
  if (bona.empty() || spoof.empty()) {
    throw std::invalid_argument("rocch_eer: need both bonafide and spoof scores");
  }
  std::sort(bona.begin(), bona.end(), std::greater<>());
  std::sort(spoof.begin(), spoof.end(), std::greater<>());
  const double nb = static_cast<double>(bona.size());
  const double ns = static_cast<double>(spoof.size());

  // Sweep the threshold down through the distinct score values; a value
  // present in both classes advances both counts in a single step.
  double prev_fa = 0.0, prev_miss = 1.0, prev_thr = bona[0] + 1.0;
  std::size_t ib = 0, is = 0;
  EerResult result;
  result.num_bonafide = bona.size();
  result.num_spoof = spoof.size();

  while (ib < bona.size() || is < spoof.size()) {
    double v;
    if (ib < bona.size() && is < spoof.size()) {
      v = std::max(bona[ib], spoof[is]);
    } else if (ib < bona.size()) {
      v = bona[ib];
    } else {
      v = spoof[is];
    }
    while (ib < bona.size() && bona[ib] == v) ++ib;
    while (is < spoof.size() && spoof[is] == v) ++is;

    // Accept score >= v: everything at or above v has been accepted.
    const double fa = static_cast<double>(is) / ns;
    const double miss = (nb - static_cast<double>(ib)) / nb;

    if (miss <= fa) {
      if (miss == fa) {
        result.eer = miss;
        result.threshold = v;
        return result;
      }
      // Crossing lies inside the segment; interpolate linearly.
      const double denom = (fa - prev_fa) - (miss - prev_miss);
      const double alpha = (prev_miss - prev_fa) / denom;
      result.eer = prev_fa + alpha * (fa - prev_fa);
      result.threshold = prev_thr + alpha * (v - prev_thr);
      return result;
    }
    prev_fa = fa;
    prev_miss = miss;
    prev_thr = v;
  }
  // Curve ended at (1, 0) without crossing (cannot happen: miss - fa moves
  // from +1 to -1), but keep a defined result.
  result.eer = 0.5;
  result.threshold = prev_thr;
  return result;
}

std::map<std::string, EerResult> per_attack_eer(
    const std::vector<ScoreRecord>& records) {
  std::vector<ScoreRecord> bona;
  std::map<std::string, std::vector<ScoreRecord>> attacks;
  for (const auto& r : records) {
    if (r.key == TrialKey::Bonafide) {
      bona.push_back(r);
    } else {
      attacks[r.attack_id].push_back(r);
    }
  }
  if (bona.empty()) {
    throw std::invalid_argument("per_attack_eer: no bonafide records");
  }
  if (attacks.empty()) {
    throw std::invalid_argument("per_attack_eer: no spoof records");
  }
  std::map<std::string, EerResult> out;
  for (auto& [attack, recs] : attacks) {
    recs.insert(recs.end(), bona.begin(), bona.end());
    out[attack] = rocch_eer(recs);
  }
  return out;
}

void write_scores(const std::filesystem::path& path,
                  const std::vector<ScoreRecord>& records) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  char buf[64];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.score);
    os << r.utterance_id << '\t' << r.attack_id << '\t'
       << (r.key == TrialKey::Bonafide ? "bonafide" : "spoof") << '\t' << buf
       << '\n';
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::vector<ScoreRecord> read_scores(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::vector<ScoreRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    ScoreRecord r;
    std::string key;
    if (!(ls >> r.utterance_id >> r.attack_id >> key >> r.score)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": malformed score line");
    }
    if (key == "bonafide") {
      r.key = TrialKey::Bonafide;
    } else if (key == "spoof") {
      r.key = TrialKey::Spoof;
    } else {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace sslens
