#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include <doctest.h>

#include "sslens/metrics.hpp"

using namespace sslens;

namespace {

std::vector<ScoreRecord> make_records(const std::vector<double>& bona,
                                      const std::vector<double>& spoof) {
  std::vector<ScoreRecord> out;
  int i = 0;
  for (double s : bona) {
    out.push_back({"B" + std::to_string(i++), "bonafide", TrialKey::Bonafide, s});
  }
  for (double s : spoof) {
    out.push_back({"S" + std::to_string(i++), "A01", TrialKey::Spoof, s});
  }
  return out;
}

// Exhaustive oracle: walk the distinct thresholds of the empirical ROC
// operating-point polyline (ties as one step) and find the miss = fa
// crossing by linear interpolation within the containing segment.
double oracle_eer(const std::vector<double>& bona,
                  const std::vector<double>& spoof) {
  std::vector<double> thresholds;
  thresholds.insert(thresholds.end(), bona.begin(), bona.end());
  thresholds.insert(thresholds.end(), spoof.begin(), spoof.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<double>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  const auto rates = [&](double thr) {
    // Accept (call bona fide) when score >= thr.
    double miss = 0.0, fa = 0.0;
    for (double s : bona) miss += (s < thr) ? 1.0 : 0.0;
    for (double s : spoof) fa += (s >= thr) ? 1.0 : 0.0;
    return std::pair<double, double>(miss / bona.size(), fa / spoof.size());
  };

  // Start above every score: nothing accepted, miss = 1, fa = 0.
  double prev_miss = 1.0, prev_fa = 0.0;
  for (double thr : thresholds) {
    const auto [miss, fa] = rates(thr);
    if (miss <= fa) {
      const double denom = (prev_miss - prev_fa) - (miss - fa);
      if (denom <= 0.0) return miss;
      const double alpha = (prev_miss - prev_fa) / denom;
      return prev_fa + alpha * (fa - prev_fa);
    }
    prev_miss = miss;
    prev_fa = fa;
  }
  return 1.0;  // unreachable for two-class input
}

}  // namespace

TEST_CASE("perfect separation gives zero") {
  const auto recs = make_records({5.0, 4.0, 3.0}, {2.0, 1.0, 0.0});
  CHECK(rocch_eer(recs).eer == 0.0);
}

TEST_CASE("identical score multisets give one half") {
  const auto recs = make_records({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0});
  CHECK(rocch_eer(recs).eer == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("hand-worked crossing example") {
  const auto recs = make_records({0.9, 0.8, 0.4}, {0.7, 0.3, 0.2});
  const EerResult r = rocch_eer(recs);
  CHECK(r.eer == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r.num_bonafide == 3);
  CHECK(r.num_spoof == 3);
}

TEST_CASE("matches the exhaustive oracle on random score sets") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> count(2, 50);
  std::uniform_real_distribution<double> value(-3.0, 3.0);
  std::uniform_int_distribution<int> coarse(0, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> bona(count(rng)), spoof(count(rng));
    for (double& s : bona) s = value(rng);
    for (double& s : spoof) s = value(rng);
    if (coarse(rng)) {
      // Quantize to force ties across and within classes.
      for (double& s : bona) s = std::round(s * 2.0) / 2.0;
      for (double& s : spoof) s = std::round(s * 2.0) / 2.0;
    }
    const double expected = oracle_eer(bona, spoof);
    const double actual = rocch_eer(make_records(bona, spoof)).eer;
    CHECK(std::abs(actual - expected) < 1e-12);
  }
}

TEST_CASE("invariant under monotone score transforms") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> value(-2.0, 2.0);
  std::vector<double> bona(20), spoof(25);
  for (double& s : bona) s = value(rng);
  for (double& s : spoof) s = value(rng);
  const double base = rocch_eer(make_records(bona, spoof)).eer;
  auto mapped = [&](auto f) {
    std::vector<double> b = bona, s = spoof;
    for (double& x : b) x = f(x);
    for (double& x : s) x = f(x);
    return rocch_eer(make_records(b, s)).eer;
  };
  CHECK(mapped([](double x) { return 3.0 * x + 7.0; }) ==
        doctest::Approx(base).epsilon(1e-12));
  CHECK(mapped([](double x) { return std::tanh(x); }) ==
        doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("swapping classes and negating scores preserves the EER") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> value(-2.0, 2.0);
  std::vector<double> bona(15), spoof(15);
  for (double& s : bona) s = value(rng);
  for (double& s : spoof) s = value(rng);
  std::vector<double> neg_bona = spoof, neg_spoof = bona;
  for (double& s : neg_bona) s = -s;
  for (double& s : neg_spoof) s = -s;
  CHECK(rocch_eer(make_records(bona, spoof)).eer ==
        doctest::Approx(rocch_eer(make_records(neg_bona, neg_spoof)).eer)
            .epsilon(1e-12));
}

TEST_CASE("single-class input is rejected") {
  CHECK_THROWS_AS(rocch_eer(make_records({1.0, 2.0}, {})),
                  std::invalid_argument);
  CHECK_THROWS_AS(rocch_eer(make_records({}, {1.0})), std::invalid_argument);
  CHECK_THROWS_AS(rocch_eer({}), std::invalid_argument);
}

TEST_CASE("per-attack splits reuse all bona fide trials") {
  std::vector<ScoreRecord> recs = make_records({0.9, 0.8, 0.4}, {});
  recs.push_back({"S1", "A01", TrialKey::Spoof, 0.7});
  recs.push_back({"S2", "A01", TrialKey::Spoof, 0.3});
  recs.push_back({"S3", "A01", TrialKey::Spoof, 0.2});
  recs.push_back({"S4", "A02", TrialKey::Spoof, -1.0});
  recs.push_back({"S5", "A02", TrialKey::Spoof, -2.0});
  const auto by_attack = per_attack_eer(recs);
  REQUIRE(by_attack.size() == 2);
  CHECK(by_attack.at("A01").eer == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(by_attack.at("A02").eer == 0.0);
  CHECK(by_attack.at("A02").num_bonafide == 3);
  CHECK(by_attack.at("A02").num_spoof == 2);
}

TEST_CASE("score file round-trip is bit-exact") {
  std::vector<ScoreRecord> recs = make_records({1.0 / 3.0, 1e-300}, {0.1, -0.2});
  recs[0].score = 0.1 + 0.2;  // not representable exactly, good round-trip probe
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "sslens_test_scores.tsv";
  write_scores(path, recs);
  const auto back = read_scores(path);
  std::filesystem::remove(path);
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].utterance_id == recs[i].utterance_id);
    CHECK(back[i].attack_id == recs[i].attack_id);
    CHECK(back[i].key == recs[i].key);
    CHECK(back[i].score == recs[i].score);
  }
}
