#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

namespace sslens {

// In-place iterative radix-2 FFT. Size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

std::size_t next_pow2(std::size_t n);

// DFT of a real signal, returned as the N/2+1 non-redundant bins.
// The input is zero-padded (or truncated) to fft_size, a power of two.
Eigen::VectorXcd rfft(const Eigen::Ref<const Eigen::VectorXd>& x,
                      std::size_t fft_size);

// Inverse of rfft for a conjugate-symmetric half spectrum; returns a real
// signal of length fft_size.
Eigen::VectorXd irfft(const Eigen::Ref<const Eigen::VectorXcd>& half,
                      std::size_t fft_size);

// Linear convolution of x with kernel h via FFT, full length x+h-1.
Eigen::VectorXd fft_convolve(const Eigen::Ref<const Eigen::VectorXd>& x,
                             const Eigen::Ref<const Eigen::VectorXd>& h);

}  // namespace sslens
