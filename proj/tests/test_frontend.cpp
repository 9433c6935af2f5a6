#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include <doctest.h>

#include "sslens/frontend.hpp"

using namespace sslens;

namespace {

AudioSignal noise_signal(double seconds, int sample_rate, unsigned seed) {
  AudioSignal s;
  s.sample_rate = sample_rate;
  const int n = static_cast<int>(seconds * sample_rate);
  std::srand(seed);
  s.samples = Eigen::VectorXd::Random(n) * 0.3;
  return s;
}

}  // namespace

TEST_CASE("append_deltas column layout and ramp oracle") {
  // Frame index t with statics [t, 2t]: the symmetric 3-point slope of a
  // linear ramp is the ramp's slope everywhere except the replicated edges.
  const int T = 10;
  Eigen::MatrixXd statics(T, 2);
  for (int t = 0; t < T; ++t) {
    statics(t, 0) = t;
    statics(t, 1) = 2.0 * t;
  }
  const Eigen::MatrixXd full = append_deltas(statics);
  REQUIRE(full.rows() == T);
  REQUIRE(full.cols() == 6);
  CHECK((full.leftCols(2) - statics).cwiseAbs().maxCoeff() == 0.0);
  for (int t = 1; t < T - 1; ++t) {
    CHECK(full(t, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(full(t, 3) == doctest::Approx(2.0).epsilon(1e-12));
  }
  // Edge replication halves the slope at the boundary frames.
  CHECK(full(0, 2) == doctest::Approx(0.5));
  CHECK(full(T - 1, 2) == doctest::Approx(0.5));
  // Delta-delta of a linear ramp vanishes in the interior of the interior.
  for (int t = 2; t < T - 2; ++t) {
    CHECK(std::abs(full(t, 4)) < 1e-12);
  }
}

TEST_CASE("constant statics give zero deltas") {
  const Eigen::MatrixXd statics = Eigen::MatrixXd::Constant(8, 3, 4.2);
  const Eigen::MatrixXd full = append_deltas(statics);
  CHECK(full.rightCols(6).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cqcc extraction dimension contract") {
  const AudioSignal s = noise_signal(0.5, 16000, 11);
  const CqtParams params = CqtParams::reduced(16000, 24, 6, 7600.0);
  const FeatureMatrix lin = cqcc_extract(s, params, FrequencyScale::Linear);
  CHECK(lin.frames.cols() == 3 * kCqccStatics);
  CHECK(lin.frames.rows() > 10);
  CHECK(lin.static_count == kCqccStatics);
  CHECK(lin.feature_kind == FeatureKind::CqccLinear);
  CHECK(lin.frames.allFinite());

  const FeatureMatrix geo = cqcc_extract(s, params, FrequencyScale::Geometric);
  CHECK(geo.feature_kind == FeatureKind::CqccGeometric);
  CHECK(geo.frames.rows() == lin.frames.rows());
  CHECK(geo.frames.cols() == lin.frames.cols());
  // Resampling changes the log-spectral shape, so the cepstra must differ.
  CHECK((geo.frames - lin.frames).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("lfcc extraction dimension contract") {
  const AudioSignal s = noise_signal(0.5, 16000, 12);
  const FeatureMatrix f = lfcc_extract(s);
  CHECK(f.frames.cols() == 3 * kLfccStatics);
  CHECK(f.static_count == kLfccStatics);
  CHECK(f.feature_kind == FeatureKind::Lfcc);
  CHECK(f.frames.allFinite());
  // 0.5 s at a 10 ms hop with a 20 ms window: 49 full frames.
  CHECK(f.frames.rows() == 49);
}

TEST_CASE("silence produces finite features") {
  AudioSignal s;
  s.sample_rate = 16000;
  s.samples = Eigen::VectorXd::Zero(8000);
  const FeatureMatrix f = lfcc_extract(s);
  CHECK(f.frames.allFinite());
  const FeatureMatrix c =
      cqcc_extract(s, CqtParams::reduced(16000, 24, 6, 7600.0),
                   FrequencyScale::Linear);
  CHECK(c.frames.allFinite());
}

TEST_CASE("triangular filterbank partitions the spectrum") {
  const int nf = 20, nfft = 512, sr = 16000;
  const Eigen::MatrixXd fb = linear_triangle_filterbank(nf, nfft, sr);
  REQUIRE(fb.rows() == nf);
  REQUIRE(fb.cols() == nfft / 2 + 1);
  CHECK(fb.minCoeff() >= 0.0);
  CHECK(fb.maxCoeff() <= 1.0 + 1e-12);
  // Each filter peaks at its own center edge, i.e. at bin near
  // (i+1) * Nyquist / (nf+1).
  for (int i = 0; i < nf; ++i) {
    Eigen::Index argmax;
    fb.row(i).maxCoeff(&argmax);
    const double center_hz = (i + 1) * (sr / 2.0) / (nf + 1);
    const double bin_hz = argmax * static_cast<double>(sr) / nfft;
    CHECK(std::abs(bin_hz - center_hz) <= static_cast<double>(sr) / nfft);
  }
  // Adjacent triangles overlap; non-adjacent ones do not.
  CHECK((fb.row(0).cwiseProduct(fb.row(1))).maxCoeff() > 0.0);
  CHECK((fb.row(0).cwiseProduct(fb.row(2))).maxCoeff() == 0.0);
}

TEST_CASE("lfcc energy moves c0") {
  const AudioSignal s = noise_signal(0.5, 16000, 13);
  AudioSignal loud = s;
  loud.samples *= 2.0;
  const FeatureMatrix a = lfcc_extract(s);
  const FeatureMatrix b = lfcc_extract(loud);
  // A global gain shifts every log filter output by the same constant,
  // which only the DC cepstral coefficient picks up.
  CHECK((b.frames.col(0) - a.frames.col(0)).minCoeff() > 0.0);
  for (int p = 1; p < kLfccStatics; ++p) {
    CHECK((b.frames.col(p) - a.frames.col(p)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("feature file round-trip is bit-exact") {
  FeatureMatrix f;
  f.frames = Eigen::MatrixXd::Random(17, 90);
  f.frames(3, 7) = 1e-300;
  f.frames(4, 8) = -1.0 / 3.0;
  f.feature_kind = FeatureKind::CqccGeometric;
  f.static_count = 30;
  f.utterance_id = "UTT_0001";
  f.band = "400-7600";
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "sslens_test_feat.bin";
  write_features(path, f);
  const FeatureMatrix g = read_features(path);
  std::filesystem::remove(path);
  CHECK(g.feature_kind == f.feature_kind);
  REQUIRE(g.frames.rows() == f.frames.rows());
  REQUIRE(g.frames.cols() == f.frames.cols());
  CHECK((g.frames - f.frames).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("feature kind names round-trip") {
  for (const FeatureKind kind : {FeatureKind::CqccLinear,
                                 FeatureKind::CqccGeometric,
                                 FeatureKind::Lfcc}) {
    CHECK(feature_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(feature_kind_from_string("mfcc"), std::invalid_argument);
}
