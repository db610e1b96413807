#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace varid {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Invalid arguments or malformed inputs (bad node indices, shape
/// mismatches, inconsistent class sets, ...).
class InputError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The linear system behind a covariance or Jacobian computation is
/// numerically singular. Parameters drawn from a continuous distribution
/// avoid this almost surely; callers should re-draw with a fresh seed.
class SingularSystemError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Deterministic random stream. Doubles are produced from the raw 64-bit
/// engine output instead of std::uniform_real_distribution so that a seed
/// yields the same values on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// +1 or -1 with equal probability.
  double sign() { return (engine_() & 1u) ? 1.0 : -1.0; }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Kronecker product a (x) b.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

struct NumericalRank {
  int rank = 0;
  /// Smallest accepted singular value over the largest rejected one;
  /// +inf when nothing was rejected.
  double gap = std::numeric_limits<double>::infinity();
  Vector singular_values;
};

/// Rank of m with singular values below tol * s_max * max(rows, cols)
/// treated as zero.
inline NumericalRank numerical_rank(const Matrix& m, double tol = 1e-8) {
  NumericalRank out;
  if (m.rows() == 0 || m.cols() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(m);
  out.singular_values = svd.singularValues();
  const double cutoff =
      tol * out.singular_values(0) * static_cast<double>(std::max(m.rows(), m.cols()));
  int r = 0;
  while (r < out.singular_values.size() && out.singular_values(r) > cutoff) ++r;
  out.rank = r;
  if (r > 0 && r < out.singular_values.size() && out.singular_values(r) > 0.0)
    out.gap = out.singular_values(r - 1) / out.singular_values(r);
  return out;
}

/// Largest absolute entry, 0 for empty matrices.
inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool same_pattern(const BoolMatrix& a, const BoolMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a.array() == b.array()).all();
}

}  // namespace varid
