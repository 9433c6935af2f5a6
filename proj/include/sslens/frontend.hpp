#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Core>

#include "sslens/audio.hpp"
#include "sslens/cqt.hpp"

namespace sslens {

enum class FeatureKind : std::uint8_t {
  CqccLinear = 0,
  CqccGeometric = 1,
  Lfcc = 2,
};

enum class FrequencyScale { Linear, Geometric };

std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& name);

struct FeatureMatrix {
  Eigen::MatrixXd frames;  // T frames x D dims; D = 3 * static_count
  FeatureKind feature_kind = FeatureKind::CqccLinear;
  int static_count = 0;
  std::string utterance_id;
  std::string band;  // "fmin-fmax" or empty when unfiltered
};

inline constexpr int kCqccStatics = 30;  // p = 0..29 -> 90 dims with deltas
inline constexpr int kLfccStatics = 20;  // -> 60 dims with deltas

struct LfccParams {
  double window_seconds = 0.020;
  double hop_seconds = 0.010;
  int fft_size = 512;
  int num_filters = 20;
  int num_coeffs = kLfccStatics;
};

// Velocity and acceleration by 3-point symmetric regression over
// edge-replicated frames; columns ordered [statics | delta | delta-delta].
Eigen::MatrixXd append_deltas(const Eigen::Ref<const Eigen::MatrixXd>& statics);

// CQT -> squared magnitude -> (spline resampling iff scale is linear) ->
// log -> orthonormal DCT-II keeping 30 coefficients -> deltas. 90 columns.
FeatureMatrix cqcc_extract(const AudioSignal& signal, const CqtParams& params,
                           FrequencyScale scale);

// Framed DFT power -> 20 linearly spaced triangular filters -> log ->
// orthonormal DCT-II keeping 20 coefficients -> deltas. 60 columns.
FeatureMatrix lfcc_extract(const AudioSignal& signal,
                           const LfccParams& params = {});

// Triangular filter bank, num_filters x (fft_size/2 + 1), linearly spaced
// from 0 to Nyquist.
Eigen::MatrixXd linear_triangle_filterbank(int num_filters, int fft_size,
                                           int sample_rate);

// Feature cache files: magic "SSLF", version u16, kind u8, T u32, D u32,
// then row-major little-endian doubles.
void write_features(const std::filesystem::path& path, const FeatureMatrix& f);
FeatureMatrix read_features(const std::filesystem::path& path);

}  // namespace sslens
