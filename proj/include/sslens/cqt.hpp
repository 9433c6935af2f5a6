#pragma once

#include <vector>

#include <Eigen/Core>

#include "sslens/audio.hpp"

namespace sslens {

enum class WindowKind { Hann };

// Geometric filter-bank parameters. Bin centers follow
// f_k = f1 * 2^((k-1)/B), k = 1..K, and every filter shares the
// quality factor Q = 1 / (2^(1/B) - 1).
struct CqtParams {
  double f1 = 0.0;          // center of the lowest bin, Hz
  int bins_per_octave = 0;  // B
  int num_bins = 0;         // K
  WindowKind window_kind = WindowKind::Hann;
  int hop = 0;              // samples between analysis instants
  int sample_rate = 0;      // Hz

  double q_factor() const;

  // Reference configuration: 9 octaves below Nyquist, 96 bins per octave,
  // 16 ms hop.
  static CqtParams reference(int sample_rate);

  // Reduced configuration for fast studies: fewer octaves and bins, same
  // structure. `octaves` counts doublings below `top_freq`.
  static CqtParams reduced(int sample_rate, int bins_per_octave, int octaves,
                           double top_freq);
};

// Throws std::invalid_argument naming the offending field; the highest bin
// center must stay below Nyquist.
void validate(const CqtParams& params);

struct CqtSpectrogram {
  Eigen::MatrixXcd values;      // K bins x N frames
  Eigen::VectorXd bin_freqs;    // Hz, geometric
  Eigen::VectorXd frame_times;  // seconds
  CqtParams params;
};

// Geometric series of bin centers, strictly increasing with constant
// ratio 2^(1/B).
Eigen::VectorXd cqt_center_frequencies(const CqtParams& params);

// Per-bin window lengths floor(Q * fs / f_k), forced odd so the Hann taper
// is symmetric about the analysis instant.
std::vector<int> cqt_window_lengths(const CqtParams& params);

// Constant-Q transform: at every frame instant n = t*hop and bin k, the
// inner product of the signal with a zero-centred windowed complex
// exponential of length N_k. Edges are zero-padded. Kernels are normalized
// by the window sum so a unit tone at a bin center yields magnitude ~0.5.
CqtSpectrogram cqt(const AudioSignal& signal, const CqtParams& params);

}  // namespace sslens
