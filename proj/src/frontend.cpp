#include "sslens/frontend.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "sslens/cepstrum.hpp"
#include "sslens/fft.hpp"
#include "sslens/spectrum.hpp"

namespace sslens {

std::string to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::CqccLinear: return "cqcc-linear";
    case FeatureKind::CqccGeometric: return "cqcc-geometric";
    case FeatureKind::Lfcc: return "lfcc";
  }
  throw std::invalid_argument("unknown FeatureKind");
}

FeatureKind feature_kind_from_string(const std::string& name) {
  if (name == "cqcc-linear") return FeatureKind::CqccLinear;
  if (name == "cqcc-geometric") return FeatureKind::CqccGeometric;
  if (name == "lfcc") return FeatureKind::Lfcc;
  throw std::invalid_argument("unknown front-end '" + name + "'");
}

Eigen::MatrixXd append_deltas(const Eigen::Ref<const Eigen::MatrixXd>& statics) {
  const Eigen::Index t = statics.rows();
  const Eigen::Index s = statics.cols();
  if (t < 1) throw std::invalid_argument("append_deltas: no frames");

  auto regress = [&](const Eigen::MatrixXd& c) {
    Eigen::MatrixXd d(t, s);
    for (Eigen::Index i = 0; i < t; ++i) {
      const Eigen::Index prev = std::max<Eigen::Index>(0, i - 1);
      const Eigen::Index next = std::min<Eigen::Index>(t - 1, i + 1);
      d.row(i) = 0.5 * (c.row(next) - c.row(prev));
    }
    return d;
  };

  Eigen::MatrixXd out(t, 3 * s);
  out.leftCols(s) = statics;
  const Eigen::MatrixXd delta = regress(statics);
  out.middleCols(s, s) = delta;
  out.rightCols(s) = regress(delta);
  return out;
}

FeatureMatrix cqcc_extract(const AudioSignal& signal, const CqtParams& params,
                           FrequencyScale scale) {
  const CqtSpectrogram spec = cqt(signal, params);
  LinearPowerSpectrogram power = power_spectrogram(spec);
  if (scale == FrequencyScale::Linear) {
    power = resample_to_linear(power, default_linear_bins(power.bin_freqs));
  }
  const Eigen::MatrixXd statics =
      cepstra(power, kCqccStatics).transpose();  // T x P

  FeatureMatrix out;
  out.frames = append_deltas(statics);
  out.feature_kind = scale == FrequencyScale::Linear
                         ? FeatureKind::CqccLinear
                         : FeatureKind::CqccGeometric;
  out.static_count = kCqccStatics;
  return out;
}

Eigen::MatrixXd linear_triangle_filterbank(int num_filters, int fft_size,
                                           int sample_rate) {
  const int num_bins = fft_size / 2 + 1;
  const double nyquist = 0.5 * sample_rate;
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(num_filters, num_bins);
  // Filter i spans [edge(i-1), edge(i+1)] with apex at edge(i), edges
  // uniform on [0, Nyquist].
  auto edge = [&](int i) { return nyquist * i / (num_filters + 1); };
  for (int i = 1; i <= num_filters; ++i) {
    const double lo = edge(i - 1), mid = edge(i), hi = edge(i + 1);
    for (int b = 0; b < num_bins; ++b) {
      const double f = static_cast<double>(b) * sample_rate / fft_size;
      if (f > lo && f < mid) {
        fb(i - 1, b) = (f - lo) / (mid - lo);
      } else if (f >= mid && f < hi) {
        fb(i - 1, b) = (hi - f) / (hi - mid);
      }
    }
  }
  return fb;
}

FeatureMatrix lfcc_extract(const AudioSignal& signal, const LfccParams& params) {
  validate(signal);
  const int win = static_cast<int>(std::lround(params.window_seconds *
                                               signal.sample_rate));
  const int hop = static_cast<int>(std::lround(params.hop_seconds *
                                               signal.sample_rate));
  const Eigen::Index n = signal.samples.size();
  if (n < win) {
    throw std::invalid_argument("lfcc_extract: utterance shorter than one frame");
  }
  const Eigen::Index num_frames = (n - win) / hop + 1;

  Eigen::VectorXd window(win);
  for (int i = 0; i < win; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (win - 1)));
  }

  const Eigen::MatrixXd fb = linear_triangle_filterbank(
      params.num_filters, params.fft_size, signal.sample_rate);
  const Eigen::MatrixXd dct =
      dct_ii_matrix(params.num_coeffs, params.num_filters);

  Eigen::MatrixXd statics(num_frames, params.num_coeffs);
  for (Eigen::Index t = 0; t < num_frames; ++t) {
    const Eigen::VectorXd frame =
        signal.samples.segment(t * hop, win).cwiseProduct(window);
    const Eigen::VectorXcd spec = rfft(frame, params.fft_size);
    const Eigen::VectorXd power = spec.array().abs2();
    const Eigen::VectorXd energies =
        (fb * power).array().max(kLogPowerFloor).log();
    statics.row(t) = (dct * energies).transpose();
  }

  FeatureMatrix out;
  out.frames = append_deltas(statics);
  out.feature_kind = FeatureKind::Lfcc;
  out.static_count = params.num_coeffs;
  return out;
}

namespace {

constexpr char kFeatureMagic[4] = {'S', 'S', 'L', 'F'};
constexpr std::uint16_t kFeatureVersion = 1;

template <typename T>
void write_le(std::ostream& os, T value) {
  // Little-endian host assumed; fields are fixed-width integers or doubles.
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  return value;
}

}  // namespace

void write_features(const std::filesystem::path& path, const FeatureMatrix& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os.write(kFeatureMagic, 4);
  write_le<std::uint16_t>(os, kFeatureVersion);
  write_le<std::uint8_t>(os, static_cast<std::uint8_t>(f.feature_kind));
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.frames.rows()));
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.frames.cols()));
  for (Eigen::Index r = 0; r < f.frames.rows(); ++r) {
    for (Eigen::Index c = 0; c < f.frames.cols(); ++c) {
      write_le<double>(os, f.frames(r, c));
    }
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

FeatureMatrix read_features(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kFeatureMagic, 4) != 0) {
    throw std::runtime_error("not a feature file: " + path.string());
  }
  const auto version = read_le<std::uint16_t>(is);
  if (version != kFeatureVersion) {
    throw std::runtime_error("unsupported feature file version " +
                             std::to_string(version));
  }
  FeatureMatrix f;
  f.feature_kind = static_cast<FeatureKind>(read_le<std::uint8_t>(is));
  const auto rows = read_le<std::uint32_t>(is);
  const auto cols = read_le<std::uint32_t>(is);
  f.frames = Eigen::MatrixXd(rows, cols);
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      f.frames(r, c) = read_le<double>(is);
    }
  }
  if (!is) throw std::runtime_error("truncated feature file: " + path.string());
  f.static_count = static_cast<int>(cols) / 3;
  return f;
}

}  // namespace sslens
