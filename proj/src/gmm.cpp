#include "sslens/gmm.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sslens {

namespace {

// T x M matrix of log(w_m) + log N(x_t; mu_m, diag sigma_m^2).
Eigen::MatrixXd weighted_log_densities(
    const GmmModel& model, const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  const Eigen::Index d = rows.cols();
  const Eigen::ArrayXXd inv_var = model.variances.array().inverse();  // M x D
  const Eigen::MatrixXd mu_over_var =
      (model.means.array() * inv_var).matrix();  // M x D

  Eigen::VectorXd comp_const(model.num_components());
  for (int m = 0; m < model.num_components(); ++m) {
    comp_const[m] = std::log(model.weights[m]) -
                    0.5 * d * std::log(2.0 * std::numbers::pi) -
                    0.5 * model.variances.row(m).array().log().sum() -
                    0.5 * (model.means.row(m).array().square() *
                           inv_var.row(m)).sum();
  }

  Eigen::MatrixXd quad =
      rows.array().square().matrix() * (0.5 * inv_var.matrix()).transpose() -
      rows * mu_over_var.transpose();
  return (-quad).rowwise() + comp_const.transpose();
}

Eigen::VectorXd rowwise_logsumexp(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  const Eigen::VectorXd mx = m.rowwise().maxCoeff();
  return mx.array() +
         ((m.colwise() - mx).array().exp().rowwise().sum()).log();
}

// Deterministic rescue for an empty component: copy the component with the
// largest total variance, offset its mean by one standard deviation, and
// split the weight.
void reseed_component(GmmModel& model, int empty) {
  int donor = 0;
  double best = -1.0;
  for (int m = 0; m < model.num_components(); ++m) {
    if (m == empty) continue;
    const double total = model.variances.row(m).sum();
    if (total > best) { best = total; donor = m; }
  }
  model.means.row(empty) =
      model.means.row(donor) + model.variances.row(donor).cwiseSqrt();
  model.variances.row(empty) = model.variances.row(donor);
  const double w = 0.5 * model.weights[donor];
  model.weights[donor] = w;
  model.weights[empty] = w;
}

Eigen::MatrixXd kmeanspp_centers(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                                 int k, std::uint64_t seed) {
  const Eigen::Index t = rows.rows();
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd centers(k, rows.cols());

  std::uniform_int_distribution<Eigen::Index> first(0, t - 1);
  centers.row(0) = rows.row(first(rng));

  Eigen::VectorXd dist2 =
      (rows.rowwise() - centers.row(0)).rowwise().squaredNorm();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    const double total = dist2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double target = unit(rng) * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < t; ++i) {
        acc += dist2[i];
        if (acc >= target) { pick = i; break; }
        pick = i;
      }
    } else {
      pick = first(rng);
    }
    centers.row(c) = rows.row(pick);
    dist2 = dist2.cwiseMin(
        (rows.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

}  // namespace

GmmModel gmm_train(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                   const TrainConfig& config) {
  const Eigen::Index t = rows.rows();
  const Eigen::Index d = rows.cols();
  const int k = config.num_components;
  if (k < 1) throw std::invalid_argument("gmm_train: num_components < 1");
  if (t < k) {
    throw std::invalid_argument("gmm_train: " + std::to_string(t) +
                                " rows for " + std::to_string(k) +
                                " components");
  }
  if (!rows.allFinite()) {
    throw std::invalid_argument("gmm_train: non-finite feature row");
  }

  const Eigen::RowVectorXd global_mean = rows.colwise().mean();
  const Eigen::RowVectorXd global_var =
      (rows.rowwise() - global_mean).array().square().colwise().mean();
  const Eigen::RowVectorXd floor =
      (config.variance_floor_factor * global_var.array()).max(1e-12);

  GmmModel model;
  model.means = kmeanspp_centers(rows, k, config.seed);
  model.variances = global_var.replicate(k, 1);
  model.weights = Eigen::VectorXd::Constant(k, 1.0 / k);

  // One hard-assignment M-step from the k-means++ centers.
  {
    Eigen::VectorXi assign(t);
    for (Eigen::Index i = 0; i < t; ++i) {
      Eigen::Index best;
      (model.means.rowwise() - rows.row(i)).rowwise().squaredNorm().minCoeff(&best);
      assign[i] = static_cast<int>(best);
    }
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
    Eigen::MatrixXd sq_sums = Eigen::MatrixXd::Zero(k, d);
    for (Eigen::Index i = 0; i < t; ++i) {
      counts[assign[i]] += 1.0;
      sums.row(assign[i]) += rows.row(i);
      sq_sums.row(assign[i]) += rows.row(i).array().square().matrix();
    }
    for (int m = 0; m < k; ++m) {
      if (counts[m] > 0.0) {
        model.weights[m] = counts[m] / t;
        model.means.row(m) = sums.row(m) / counts[m];
        model.variances.row(m) =
            (sq_sums.row(m) / counts[m] -
             model.means.row(m).array().square().matrix())
                .cwiseMax(floor);
      }
    }
    for (int m = 0; m < k; ++m) {
      if (counts[m] == 0.0) reseed_component(model, m);
    }
  }

  double prev_ll = -std::numeric_limits<double>::infinity();
  int iters = 0;
  double total_ll = 0.0;
  for (int iter = 0; iter < config.max_iters; ++iter) {
    const Eigen::MatrixXd logs = weighted_log_densities(model, rows);
    const Eigen::VectorXd frame_ll = rowwise_logsumexp(logs);
    total_ll = frame_ll.sum();
    model.iteration_logliks.push_back(total_ll);
    iters = iter + 1;

    // M-step from responsibilities.
    const Eigen::MatrixXd resp =
        (logs.colwise() - frame_ll).array().exp();  // T x M
    const Eigen::VectorXd occupancy = resp.colwise().sum();  // M

    bool reseeded = false;
    for (int m = 0; m < k; ++m) {
      if (occupancy[m] < 1e-10) { reseed_component(model, m); reseeded = true; }
    }
    if (!reseeded) {
      const Eigen::MatrixXd sums = resp.transpose() * rows;  // M x D
      const Eigen::MatrixXd sq_sums =
          resp.transpose() * rows.array().square().matrix();
      for (int m = 0; m < k; ++m) {
        model.weights[m] = occupancy[m] / t;
        model.means.row(m) = sums.row(m) / occupancy[m];
        model.variances.row(m) =
            (sq_sums.row(m) / occupancy[m] -
             model.means.row(m).array().square().matrix())
                .cwiseMax(floor);
      }
    }

    if (iter > 0 && std::abs(total_ll - prev_ll) <
                        config.tol * std::abs(prev_ll)) {
      break;
    }
    prev_ll = total_ll;
  }

  std::ostringstream meta;
  meta << "{\"seed\":" << config.seed << ",\"iterations\":" << iters
       << ",\"final_loglik\":" << total_ll << "}";
  model.train_meta = meta.str();
  return model;
}

Eigen::VectorXd gmm_loglik(const GmmModel& model,
                           const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  if (rows.cols() != model.dim()) {
    throw std::invalid_argument(
        "gmm_loglik: feature dim " + std::to_string(rows.cols()) +
        " != model dim " + std::to_string(model.dim()));
  }
  return rowwise_logsumexp(weighted_log_densities(model, rows));
}

double llr_score(const GmmModel& bona, const GmmModel& spoof,
                 const FeatureMatrix& features) {
  if (features.frames.rows() == 0) {
    throw std::invalid_argument("llr_score: no frames");
  }
  const Eigen::VectorXd lb = gmm_loglik(bona, features.frames);
  const Eigen::VectorXd ls = gmm_loglik(spoof, features.frames);
  return (lb - ls).mean();
}

namespace {

constexpr char kGmmMagic[4] = {'S', 'S', 'G', 'M'};
constexpr std::uint16_t kGmmVersion = 1;

template <typename T>
void write_le(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  return value;
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) write_le<double>(os, m(r, c));
  }
}

void read_matrix(std::istream& is, Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = read_le<double>(is);
  }
}

}  // namespace

void write_gmm(const std::filesystem::path& path, const GmmModel& model) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os.write(kGmmMagic, 4);
  write_le<std::uint16_t>(os, kGmmVersion);
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(model.num_components()));
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(model.dim()));
  write_matrix(os, model.weights);
  write_matrix(os, model.means);
  write_matrix(os, model.variances);
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(model.train_meta.size()));
  os.write(model.train_meta.data(),
           static_cast<std::streamsize>(model.train_meta.size()));
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

GmmModel read_gmm(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kGmmMagic, 4) != 0) {
    throw std::runtime_error("not a model file: " + path.string());
  }
  const auto version = read_le<std::uint16_t>(is);
  if (version != kGmmVersion) {
    throw std::runtime_error("unsupported model file version " +
                             std::to_string(version));
  }
  const auto m = read_le<std::uint32_t>(is);
  const auto d = read_le<std::uint32_t>(is);
  GmmModel model;
  model.weights = Eigen::VectorXd(m);
  model.means = Eigen::MatrixXd(m, d);
  model.variances = Eigen::MatrixXd(m, d);
  Eigen::MatrixXd w(m, 1);
  read_matrix(is, w);
  model.weights = w.col(0);
  read_matrix(is, model.means);
  read_matrix(is, model.variances);
  const auto meta_len = read_le<std::uint32_t>(is);
  model.train_meta.resize(meta_len);
  is.read(model.train_meta.data(), meta_len);
  if (!is) throw std::runtime_error("truncated model file: " + path.string());
  return model;
}

}  // namespace sslens
