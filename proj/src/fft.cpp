#include "sslens/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sslens {

void fft_inplace(std::vector<std::complex<double>>& data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0) return;
  if ((n & (n - 1)) != 0) {
    throw std::invalid_argument("fft_inplace: size must be a power of two");
  }
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang =
        2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = data[i + j];
        const std::complex<double> v = data[i + j + len / 2] * w;
        data[i + j] = u + v;
        data[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& c : data) c *= scale;
  }
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

Eigen::VectorXcd rfft(const Eigen::Ref<const Eigen::VectorXd>& x,
                      std::size_t fft_size) {
  if (fft_size == 0 || (fft_size & (fft_size - 1)) != 0) {
    throw std::invalid_argument("rfft: fft_size must be a power of two");
  }
  std::vector<std::complex<double>> buf(fft_size, {0.0, 0.0});
  const std::size_t m = std::min<std::size_t>(x.size(), fft_size);
  for (std::size_t i = 0; i < m; ++i) buf[i] = {x[static_cast<Eigen::Index>(i)], 0.0};
  fft_inplace(buf, false);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(fft_size / 2 + 1));
  for (std::size_t k = 0; k <= fft_size / 2; ++k) {
    out[static_cast<Eigen::Index>(k)] = buf[k];
  }
  return out;
}

Eigen::VectorXd irfft(const Eigen::Ref<const Eigen::VectorXcd>& half,
                      std::size_t fft_size) {
  if (static_cast<std::size_t>(half.size()) != fft_size / 2 + 1) {
    throw std::invalid_argument("irfft: half-spectrum length mismatch");
  }
  std::vector<std::complex<double>> buf(fft_size);
  for (std::size_t k = 0; k <= fft_size / 2; ++k) {
    buf[k] = half[static_cast<Eigen::Index>(k)];
  }
  for (std::size_t k = fft_size / 2 + 1; k < fft_size; ++k) {
    buf[k] = std::conj(buf[fft_size - k]);
  }
  fft_inplace(buf, true);
  Eigen::VectorXd out(static_cast<Eigen::Index>(fft_size));
  for (std::size_t i = 0; i < fft_size; ++i) {
    out[static_cast<Eigen::Index>(i)] = buf[i].real();
  }
  return out;
}

Eigen::VectorXd fft_convolve(const Eigen::Ref<const Eigen::VectorXd>& x,
                             const Eigen::Ref<const Eigen::VectorXd>& h) {
  const std::size_t nx = static_cast<std::size_t>(x.size());
  const std::size_t nh = static_cast<std::size_t>(h.size());
  if (nx == 0 || nh == 0) return Eigen::VectorXd();
  const std::size_t full = nx + nh - 1;
  const std::size_t nfft = next_pow2(full);
  Eigen::VectorXcd xs = rfft(x, nfft);
  Eigen::VectorXcd hs = rfft(h, nfft);
  xs.array() *= hs.array();
  Eigen::VectorXd y = irfft(xs, nfft);
  return y.head(static_cast<Eigen::Index>(full));
}

}  // namespace sslens
