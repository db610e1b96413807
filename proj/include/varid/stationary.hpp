#pragma once

#include <Eigen/Eigenvalues>

#include "varid/graph.hpp"

namespace varid {

/// Interaction matrix on a graph's support plus the noise scale.
/// lambda(i-1, j-1) carries the weight of edge (i, j); entries off the
/// support (and off the diagonal) are exactly zero.
struct VarParameters {
  DirectedGraph graph;
  Matrix lambda;
  double omega = 1.0;
};

/// Max modulus of the eigenvalues.
inline double spectral_radius(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("spectral_radius: matrix must be square");
  if (m.rows() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline void validate_parameters(const VarParameters& p) {
  const int n = p.graph.node_count();
  if (p.lambda.rows() != n || p.lambda.cols() != n)
    throw InputError("VarParameters: lambda shape does not match the graph");
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (!p.graph.contains_edge(i, j) && p.lambda(i - 1, j - 1) != 0.0)
        throw InputError("VarParameters: nonzero entry off the graph support");
  if (!(p.omega > 0.0)) throw InputError("VarParameters: omega must be positive");
  if (spectral_radius(p.lambda) >= 1.0)
    throw InputError("VarParameters: spectral radius must be below 1");
}

/// Interaction weights drawn i.i.d. on [-magnitude, magnitude] with
/// |value| >= 0.05 * magnitude on every support entry (diagonal included).
/// If the draw is unstable, the whole matrix is rescaled to spectral radius
/// 0.95 * u with u uniform in (0.5, 1). omega is uniform in (0.5, 1.5).
/// Deterministic per seed.
inline VarParameters sample_generic_parameters(const DirectedGraph& g,
                                               std::uint64_t seed,
                                               double magnitude = 1.0) {
  if (!(magnitude > 0.0)) throw InputError("sample_generic_parameters: magnitude must be positive");
  const int n = g.node_count();
  Rng rng(seed);
  Matrix lambda = Matrix::Zero(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (g.contains_edge(i, j)) {
        const double v = rng.uniform(0.05 * magnitude, magnitude);
        lambda(i - 1, j - 1) = rng.sign() * v;
      }
  const double rho = spectral_radius(lambda);
  if (rho >= 1.0) lambda *= 0.95 * rng.uniform(0.5, 1.0) / rho;
  const double omega = rng.uniform(0.5, 1.5);
  return {g, std::move(lambda), omega};
}

/// Fixed point of S = L^T S L + omega I. Symmetric positive definite.
struct StationaryCovariance {
  Matrix sigma;
};

/// Solves the n^2 x n^2 linear system from the vectorized fixed-point
/// equation by dense LU. Throws SingularSystemError when the system is
/// numerically singular (reciprocal condition below 1e-14); fresh parameter
/// draws avoid that almost surely.
inline StationaryCovariance solve_stationary(const VarParameters& p) {
  validate_parameters(p);
  const int n = p.graph.node_count();
  const Matrix lt = p.lambda.transpose();
  const Matrix k = Matrix::Identity(n * n, n * n) - kron(lt, lt);
  Eigen::PartialPivLU<Matrix> lu(k);
  if (lu.rcond() < 1e-14)
    throw SingularSystemError(
        "solve_stationary: vectorized system is numerically singular; re-draw parameters");
  Matrix rhs = p.omega * Matrix::Identity(n, n);
  const Vector vec_rhs = Eigen::Map<const Vector>(rhs.data(), n * n);
  const Vector vec_sigma = lu.solve(vec_rhs);
  Matrix sigma = Eigen::Map<const Matrix>(vec_sigma.data(), n, n);
  sigma = ((sigma + sigma.transpose()) / 2.0).eval();

  const Matrix residual = sigma - lt * sigma * p.lambda - p.omega * Matrix::Identity(n, n);
  if (max_abs(residual) > 1e-10 * std::max(1.0, max_abs(sigma)))
    throw SingularSystemError(
        "solve_stationary: fixed-point residual too large; re-draw parameters");
  return {std::move(sigma)};
}

/// Thresholded symmetric support: nonzero iff |entry| exceeds the threshold
/// in either symmetric position.
struct SupportPattern {
  int n = 0;
  BoolMatrix nonzero;
  double threshold_used = 0.0;
};

inline SupportPattern support_of(const Matrix& m, double threshold) {
  if (m.rows() != m.cols()) throw InputError("support_of: matrix must be square");
  if (threshold < 0.0) throw InputError("support_of: threshold must be nonnegative");
  const int n = static_cast<int>(m.rows());
  SupportPattern out;
  out.n = n;
  out.threshold_used = threshold;
  out.nonzero = BoolMatrix::Constant(n, n, false);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const bool nz = std::max(std::abs(m(i, j)), std::abs(m(j, i))) > threshold;
      out.nonzero(i, j) = nz;
      out.nonzero(j, i) = nz;
    }
  return out;
}

/// Default threshold for matrices obtained from exact arithmetic.
inline double default_support_threshold(const Matrix& m) { return 1e-9 * max_abs(m); }

}  // namespace varid
