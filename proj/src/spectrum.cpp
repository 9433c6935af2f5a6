#include "sslens/spectrum.hpp"

#include <cmath>
#include <stdexcept>

namespace sslens {

LinearPowerSpectrogram power_spectrogram(const CqtSpectrogram& cqt) {
  LinearPowerSpectrogram out;
  out.values = cqt.values.array().abs2();
  out.bin_freqs = cqt.bin_freqs;
  out.f_low = cqt.bin_freqs.size() > 0 ? cqt.bin_freqs[0] : 0.0;
  out.bin_spacing = 0.0;
  out.scale_tag = ScaleTag::GeometricNative;
  return out;
}

Eigen::VectorXd natural_cubic_spline(
    const Eigen::Ref<const Eigen::VectorXd>& xs,
    const Eigen::Ref<const Eigen::VectorXd>& ys,
    const Eigen::Ref<const Eigen::VectorXd>& queries) {
  const Eigen::Index n = xs.size();
  if (n < 4) {
    throw std::invalid_argument("natural_cubic_spline: need >= 4 knots");
  }
  if (ys.size() != n) {
    throw std::invalid_argument("natural_cubic_spline: xs/ys size mismatch");
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw std::invalid_argument(
          "natural_cubic_spline: knots must be strictly increasing");
    }
  }

  // Second derivatives m_i: natural boundary m_0 = m_{n-1} = 0, interior
  // rows form a tridiagonal system solved by the Thomas algorithm.
  Eigen::VectorXd h(n - 1);
  for (Eigen::Index i = 0; i < n - 1; ++i) h[i] = xs[i + 1] - xs[i];

  Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
  const Eigen::Index ni = n - 2;  // interior unknowns
  if (ni > 0) {
    Eigen::VectorXd diag(ni), rhs(ni), upper(ni);
    for (Eigen::Index i = 0; i < ni; ++i) {
      diag[i] = 2.0 * (h[i] + h[i + 1]);
      upper[i] = h[i + 1];
      rhs[i] = 6.0 * ((ys[i + 2] - ys[i + 1]) / h[i + 1] -
                      (ys[i + 1] - ys[i]) / h[i]);
    }
    for (Eigen::Index i = 1; i < ni; ++i) {
      const double w = h[i] / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    m[ni] = rhs[ni - 1] / diag[ni - 1];
    for (Eigen::Index i = ni - 1; i >= 1; --i) {
      m[i] = (rhs[i - 1] - upper[i - 1] * m[i + 1]) / diag[i - 1];
    }
  }

  Eigen::VectorXd out(queries.size());
  for (Eigen::Index q = 0; q < queries.size(); ++q) {
    const double x = queries[q];
    // Locate the containing interval; queries outside extrapolate from the
    // boundary piece.
    Eigen::Index i = 0;
    if (x >= xs[n - 2]) {
      i = n - 2;
    } else if (x > xs[0]) {
      Eigen::Index lo = 0, hi = n - 2;
      while (lo < hi) {
        const Eigen::Index mid = (lo + hi + 1) / 2;
        if (xs[mid] <= x) lo = mid; else hi = mid - 1;
      }
      i = lo;
    }
    const double a = (xs[i + 1] - x) / h[i];
    const double b = (x - xs[i]) / h[i];
    out[q] = a * ys[i] + b * ys[i + 1] +
             ((a * a * a - a) * m[i] + (b * b * b - b) * m[i + 1]) *
                 (h[i] * h[i]) / 6.0;
  }
  return out;
}

int default_linear_bins(const Eigen::Ref<const Eigen::VectorXd>& bin_freqs) {
  const Eigen::Index k = bin_freqs.size();
  if (k < 2) throw std::invalid_argument("default_linear_bins: need >= 2 bins");
  const double top_spacing = bin_freqs[k - 1] - bin_freqs[k - 2];
  return static_cast<int>(
      std::ceil((bin_freqs[k - 1] - bin_freqs[0]) / top_spacing));
}

LinearPowerSpectrogram resample_to_linear(const LinearPowerSpectrogram& geo,
                                          int num_linear_bins) {
  if (geo.scale_tag != ScaleTag::GeometricNative) {
    throw std::invalid_argument("resample_to_linear: input already linear");
  }
  if (geo.bin_freqs.size() < 4) {
    throw std::invalid_argument("resample_to_linear: need >= 4 geometric bins");
  }
  if (num_linear_bins < 2) {
    throw std::invalid_argument("resample_to_linear: L must be >= 2");
  }

  const double f_lo = geo.bin_freqs[0];
  const double f_hi = geo.bin_freqs[geo.bin_freqs.size() - 1];
  const double spacing = (f_hi - f_lo) / (num_linear_bins - 1);

  LinearPowerSpectrogram out;
  out.bin_freqs = Eigen::VectorXd(num_linear_bins);
  for (int l = 0; l < num_linear_bins; ++l) {
    out.bin_freqs[l] = f_lo + l * spacing;
  }
  out.bin_spacing = spacing;
  out.f_low = f_lo;
  out.scale_tag = ScaleTag::LinearResampled;
  out.values = Eigen::MatrixXd(num_linear_bins, geo.values.cols());
  for (Eigen::Index t = 0; t < geo.values.cols(); ++t) {
    out.values.col(t) =
        natural_cubic_spline(geo.bin_freqs, geo.values.col(t), out.bin_freqs)
            .cwiseMax(0.0);
  }
  return out;
}

}  // namespace sslens
