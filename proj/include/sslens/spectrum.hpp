#pragma once

#include <Eigen/Core>

#include "sslens/cqt.hpp"

namespace sslens {

enum class ScaleTag { GeometricNative, LinearResampled };

struct LinearPowerSpectrogram {
  Eigen::MatrixXd values;   // L bins x N frames, nonnegative
  Eigen::VectorXd bin_freqs;  // Hz
  double bin_spacing = 0.0;   // Hz, meaningful when linear-resampled
  double f_low = 0.0;         // Hz of the first bin
  ScaleTag scale_tag = ScaleTag::GeometricNative;
};

// Squared magnitude per cell; the bin axis is unchanged.
LinearPowerSpectrogram power_spectrogram(const CqtSpectrogram& cqt);

// Natural cubic spline through (xs, ys); evaluated at query points.
// xs must be strictly increasing with at least 4 knots.
Eigen::VectorXd natural_cubic_spline(const Eigen::Ref<const Eigen::VectorXd>& xs,
                                     const Eigen::Ref<const Eigen::VectorXd>& ys,
                                     const Eigen::Ref<const Eigen::VectorXd>& queries);

// Per-frame cubic-spline resampling of a geometric power spectrum onto
// L uniformly spaced frequencies spanning [f_1, f_K]. Negative overshoot
// is clamped to zero.
LinearPowerSpectrogram resample_to_linear(const LinearPowerSpectrogram& geo,
                                          int num_linear_bins);

// Default linear bin count: uniform spacing equal to the geometric spacing
// of the top octave's adjacent bins.
int default_linear_bins(const Eigen::Ref<const Eigen::VectorXd>& bin_freqs);

}  // namespace sslens
