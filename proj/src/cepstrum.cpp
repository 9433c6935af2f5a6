#include "sslens/cepstrum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sslens {

Eigen::MatrixXd dct_ii_matrix(int num_coeffs, int length) {
  if (num_coeffs < 1 || length < 1 || num_coeffs > length) {
    throw std::invalid_argument("dct_ii_matrix: need 1 <= P <= L");
  }
  Eigen::MatrixXd c(num_coeffs, length);
  const double s0 = std::sqrt(1.0 / length);
  const double sp = std::sqrt(2.0 / length);
  for (int p = 0; p < num_coeffs; ++p) {
    const double scale = (p == 0) ? s0 : sp;
    for (int l = 0; l < length; ++l) {
      c(p, l) = scale * std::cos(p * (l + 0.5) * std::numbers::pi / length);
    }
  }
  return c;
}

Eigen::MatrixXd cepstra(const LinearPowerSpectrogram& power, int num_coeffs) {
  const int length = static_cast<int>(power.values.rows());
  if (num_coeffs > length) {
    throw std::invalid_argument("cepstra: num_coeffs exceeds bin count");
  }
  if ((power.values.array() < 0.0).any()) {
    throw std::invalid_argument("cepstra: negative power value");
  }
  const Eigen::MatrixXd log_power =
      power.values.array().max(kLogPowerFloor).log().matrix();
  return dct_ii_matrix(num_coeffs, length) * log_power;
}

}  // namespace sslens
