#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sslens/frontend.hpp"

namespace sslens {

// Diagonal-covariance Gaussian mixture.
struct GmmModel {
  Eigen::VectorXd weights;   // M, positive, sums to 1
  Eigen::MatrixXd means;     // M x D
  Eigen::MatrixXd variances; // M x D, floored
  std::string train_meta;    // JSON blob: seed, iterations, final log-lik
  std::vector<double> iteration_logliks;  // total log-lik per EM iteration

  int num_components() const { return static_cast<int>(weights.size()); }
  int dim() const { return static_cast<int>(means.cols()); }
};

struct TrainConfig {
  int num_components = 512;
  int max_iters = 50;
  double tol = 1e-5;  // relative log-likelihood change
  double variance_floor_factor = 1e-3;  // fraction of global variance
  std::uint64_t seed = 1;
};

// EM from seeded k-means++ initialization; the total log-likelihood is
// non-decreasing across iterations and variances are floored each M-step.
// Throws if there are fewer rows than components.
GmmModel gmm_train(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                   const TrainConfig& config);

// Per-frame mixture log-density, stable log-sum-exp over components.
Eigen::VectorXd gmm_loglik(const GmmModel& model,
                           const Eigen::Ref<const Eigen::MatrixXd>& rows);

// Frame-averaged log-likelihood ratio; higher means more bona fide.
double llr_score(const GmmModel& bona, const GmmModel& spoof,
                 const FeatureMatrix& features);

// Model files: magic "SSGM", version u16, M u32, D u32, weights, means,
// variances as little-endian doubles, then a length-prefixed meta blob.
void write_gmm(const std::filesystem::path& path, const GmmModel& model);
GmmModel read_gmm(const std::filesystem::path& path);

}  // namespace sslens
