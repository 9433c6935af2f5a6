#include "sslens/cqt.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sslens {

double CqtParams::q_factor() const {
  return 1.0 / (std::pow(2.0, 1.0 / bins_per_octave) - 1.0);
}

CqtParams CqtParams::reference(int sample_rate) {
  return reduced(sample_rate, 96, 9, 0.5 * sample_rate);
}

CqtParams CqtParams::reduced(int sample_rate, int bins_per_octave, int octaves,
                             double top_freq) {
  CqtParams p;
  p.sample_rate = sample_rate;
  p.bins_per_octave = bins_per_octave;
  p.f1 = top_freq / std::pow(2.0, octaves);
  // Highest bin center must stay strictly below Nyquist.
  int k = octaves * bins_per_octave + 1;
  while (p.f1 * std::pow(2.0, static_cast<double>(k - 1) / bins_per_octave) >=
         0.5 * sample_rate) {
    --k;
  }
  p.num_bins = k;
  p.hop = static_cast<int>(std::lround(0.016 * sample_rate));
  return p;
}

void validate(const CqtParams& params) {
  if (params.sample_rate <= 0) {
    throw std::invalid_argument("CqtParams: sample_rate must be positive");
  }
  if (params.f1 <= 0.0) {
    throw std::invalid_argument("CqtParams: f1 must be positive");
  }
  if (params.bins_per_octave < 1) {
    throw std::invalid_argument("CqtParams: bins_per_octave must be >= 1");
  }
  if (params.num_bins < 1) {
    throw std::invalid_argument("CqtParams: num_bins must be >= 1");
  }
  if (params.hop < 1) {
    throw std::invalid_argument("CqtParams: hop must be >= 1");
  }
  const double f_top =
      params.f1 * std::pow(2.0, static_cast<double>(params.num_bins - 1) /
                                    params.bins_per_octave);
  if (f_top >= 0.5 * params.sample_rate) {
    throw std::invalid_argument(
        "CqtParams: bin " + std::to_string(params.num_bins) + " center " +
        std::to_string(f_top) + " Hz reaches Nyquist " +
        std::to_string(0.5 * params.sample_rate) + " Hz");
  }
}

Eigen::VectorXd cqt_center_frequencies(const CqtParams& params) {
  validate(params);
  Eigen::VectorXd freqs(params.num_bins);
  for (int k = 0; k < params.num_bins; ++k) {
    freqs[k] = params.f1 *
               std::pow(2.0, static_cast<double>(k) / params.bins_per_octave);
  }
  return freqs;
}

std::vector<int> cqt_window_lengths(const CqtParams& params) {
  const Eigen::VectorXd freqs = cqt_center_frequencies(params);
  const double q = params.q_factor();
  std::vector<int> lengths(params.num_bins);
  for (int k = 0; k < params.num_bins; ++k) {
    int len = static_cast<int>(std::floor(q * params.sample_rate / freqs[k]));
    if (len < 1) len = 1;
    if (len % 2 == 0) --len;  // symmetric about the center sample
    lengths[k] = len;
  }
  return lengths;
}

namespace {

// Windowed conjugate basis a_k*(i), i = -h..h, split into real and
// imaginary parts and normalized by the window sum.
struct Kernel {
  Eigen::VectorXd re;
  Eigen::VectorXd im;
};

Kernel make_kernel(double freq, int length, int sample_rate) {
  const int h = (length - 1) / 2;
  Kernel k{Eigen::VectorXd(length), Eigen::VectorXd(length)};
  double wsum = 0.0;
  for (int i = -h; i <= h; ++i) {
    const double w =
        0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * i / length));
    const double phase =
        2.0 * std::numbers::pi * i * freq / sample_rate;
    k.re[i + h] = w * std::cos(phase);
    k.im[i + h] = -w * std::sin(phase);  // conjugate
    wsum += w;
  }
  k.re /= wsum;
  k.im /= wsum;
  return k;
}

}  // namespace

CqtSpectrogram cqt(const AudioSignal& signal, const CqtParams& params) {
  validate(signal);
  validate(params);

  const Eigen::VectorXd freqs = cqt_center_frequencies(params);
  const std::vector<int> lengths = cqt_window_lengths(params);
  const Eigen::Index n = signal.samples.size();
  const Eigen::Index num_frames = (n - 1) / params.hop + 1;

  std::vector<Kernel> kernels(params.num_bins);
  for (int k = 0; k < params.num_bins; ++k) {
    kernels[k] = make_kernel(freqs[k], lengths[k], params.sample_rate);
  }

  CqtSpectrogram out;
  out.params = params;
  out.bin_freqs = freqs;
  out.frame_times = Eigen::VectorXd(num_frames);
  out.values = Eigen::MatrixXcd(params.num_bins, num_frames);

  const double* x = signal.samples.data();
  for (Eigen::Index t = 0; t < num_frames; ++t) {
    const Eigen::Index center = t * params.hop;
    out.frame_times[t] = static_cast<double>(center) / params.sample_rate;
    for (int k = 0; k < params.num_bins; ++k) {
      const Kernel& ker = kernels[k];
      const int h = (lengths[k] - 1) / 2;
      // Clip the window to the signal; samples outside are zero.
      const Eigen::Index lo = std::max<Eigen::Index>(0, center - h);
      const Eigen::Index hi = std::min<Eigen::Index>(n - 1, center + h);
      if (lo > hi) {
        out.values(k, t) = {0.0, 0.0};
        continue;
      }
      const Eigen::Index len = hi - lo + 1;
      const Eigen::Index koff = lo - (center - h);
      Eigen::Map<const Eigen::VectorXd> seg(x + lo, len);
      const double re = seg.dot(ker.re.segment(koff, len));
      const double im = seg.dot(ker.im.segment(koff, len));
      out.values(k, t) = {re, im};
    }
  }
  return out;
}

}  // namespace sslens
