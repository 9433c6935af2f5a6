#pragma once

#include <Eigen/Core>

#include "sslens/spectrum.hpp"

namespace sslens {

// Power values below this are floored before the log.
inline constexpr double kLogPowerFloor = 1e-30;

// Orthonormal type-II DCT matrix, num_coeffs x length:
//   C(p,l) = s_p * cos(p (l + 1/2) pi / L),  s_0 = sqrt(1/L), s_p = sqrt(2/L).
Eigen::MatrixXd dct_ii_matrix(int num_coeffs, int length);

// Per-frame orthonormal DCT-II of log(power + floor); coefficient p = 0 is
// the energy coefficient. Returns P x N.
Eigen::MatrixXd cepstra(const LinearPowerSpectrogram& power, int num_coeffs);

}  // namespace sslens
