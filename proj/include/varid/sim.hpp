#pragma once

#include <Eigen/Cholesky>
#include <optional>

#include "varid/recovery.hpp"

namespace varid {

enum class SampleSource { trajectory_tail, iid_stationary };

/// A batch of n-dimensional observations, one per row.
struct SampleBatch {
  int n = 0;
  Matrix samples;  // count x n
  SampleSource source = SampleSource::iid_stationary;
  std::uint64_t seed = 0;
};

/// Runs the recursion x_0 = e_0, x_t = L^T x_{t-1} + e_t with centered
/// Gaussian noise of covariance omega I. Returns x_0 .. x_{steps-1}.
inline SampleBatch simulate_trajectory(const VarParameters& p, long long steps,
                                       std::uint64_t seed) {
  if (steps < 1) throw InputError("simulate_trajectory: steps must be >= 1");
  validate_parameters(p);
  const int n = p.graph.node_count();
  const double noise_sd = std::sqrt(p.omega);
  Rng rng(seed);

  SampleBatch batch;
  batch.n = n;
  batch.source = SampleSource::trajectory_tail;
  batch.seed = seed;
  batch.samples.resize(steps, n);
  const Matrix lt = p.lambda.transpose();
  Vector x = Vector::Zero(n);
  for (long long t = 0; t < steps; ++t) {
    Vector eps(n);
    for (int i = 0; i < n; ++i) eps(i) = noise_sd * rng.gaussian();
    x = (t == 0) ? eps : Vector(lt * x + eps);
    batch.samples.row(t) = x.transpose();
  }
  return batch;
}

/// Draws i.i.d. vectors from the exact stationary law N(0, Sigma) through a
/// Cholesky factor of Sigma.
inline SampleBatch sample_stationary(const VarParameters& p, long long count,
                                     std::uint64_t seed) {
  if (count < 1) throw InputError("sample_stationary: count must be >= 1");
  const StationaryCovariance sc = solve_stationary(p);
  const int n = p.graph.node_count();
  Eigen::LLT<Matrix> llt(sc.sigma);
  if (llt.info() != Eigen::Success)
    throw SingularSystemError("sample_stationary: covariance is not positive definite");
  const Matrix l = llt.matrixL();

  Rng rng(seed);
  SampleBatch batch;
  batch.n = n;
  batch.source = SampleSource::iid_stationary;
  batch.seed = seed;
  batch.samples.resize(count, n);
  Vector z(n);
  for (long long t = 0; t < count; ++t) {
    for (int i = 0; i < n; ++i) z(i) = rng.gaussian();
    batch.samples.row(t) = (l * z).transpose();
  }
  return batch;
}

/// Mean-centered sample covariance with 1/(count - 1) normalization.
inline Matrix empirical_covariance(const SampleBatch& b) {
  const long long count = b.samples.rows();
  if (count < 2) throw InputError("empirical_covariance: need at least two samples");
  const Eigen::RowVectorXd mean = b.samples.colwise().mean();
  const Matrix centered = b.samples.rowwise() - mean;
  Matrix cov = (centered.transpose() * centered) / static_cast<double>(count - 1);
  return ((cov + cov.transpose()) / 2.0).eval();
}

/// Threshold rule for empirical covariances: scales with the estimator
/// noise, 4 * max|S| * sqrt(log(n) / count).
inline double default_sample_threshold(const Matrix& sigma_hat, long long count) {
  const double n = static_cast<double>(sigma_hat.rows());
  return 4.0 * max_abs(sigma_hat) * std::sqrt(std::log(n) / static_cast<double>(count));
}

struct SampleRecovery {
  RecoveryReport report;
  double threshold_used = 0.0;
};

/// Full pipeline: empirical covariance, thresholded support, class
/// reconstruction. With no explicit threshold the default sample rule is
/// applied.
inline SampleRecovery recover_from_samples(const SampleBatch& b,
                                           std::optional<double> threshold = std::nullopt) {
  const Matrix sigma_hat = empirical_covariance(b);
  const double t = threshold ? *threshold : default_sample_threshold(sigma_hat, b.samples.rows());
  const SupportPattern s = support_of(sigma_hat, t);
  return {maxclasses_from_support(s), t};
}

}  // namespace varid
