#pragma once

#include <optional>

#include "varid/stationary.hpp"

namespace varid {

/// Permutation P with P * vec(X) = vec(X^T) for every n x n X.
inline Matrix commutation_matrix(int n) {
  if (n < 1) throw InputError("commutation_matrix: n must be positive");
  Matrix p = Matrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i * n + j, j * n + i) = 1.0;
  return p;
}

/// Row labels of a graph's Jacobian: every edge (i, j) including the n
/// self-loops, lexicographic; the final row (not listed here) is omega.
inline std::vector<Edge> jacobian_row_edges(const DirectedGraph& g) {
  std::vector<Edge> rows;
  for (int i = 1; i <= g.node_count(); ++i) rows.push_back({i, i});
  rows.insert(rows.end(), g.edges().begin(), g.edges().end());
  std::sort(rows.begin(), rows.end());
  return rows;
}

/// Building block of the complete-graph Jacobian recursion:
///   B = [ (S L (x) I_n)(I + P) ; indicator of the diagonal columns ].
/// Rows are labeled lambda_ab in row-major order plus omega; columns are
/// sigma_ab for all ordered (a, b), index (a-1)*n + b.
inline Matrix build_B(const VarParameters& p, const StationaryCovariance& sigma) {
  const int n = p.graph.node_count();
  if (sigma.sigma.rows() != n || sigma.sigma.cols() != n)
    throw InputError("build_B: sigma shape does not match the graph");
  const Matrix sl = sigma.sigma * p.lambda;
  Matrix b(n * n + 1, n * n);
  b.topRows(n * n) =
      kron(sl, Matrix::Identity(n, n)) * (Matrix::Identity(n * n, n * n) + commutation_matrix(n));
  b.row(n * n).setZero();
  for (int a = 0; a < n; ++a) b(n * n, a * n + a) = 1.0;
  return b;
}

/// Keeps the rows of B that correspond to edges of g (self-loops included)
/// plus the omega row, in canonical row order.
inline Matrix project_psi(const DirectedGraph& g, const Matrix& b) {
  const int n = g.node_count();
  if (b.rows() != n * n + 1 || b.cols() != n * n)
    throw InputError("project_psi: B has the wrong shape for this graph");
  const auto rows = jacobian_row_edges(g);
  Matrix out(static_cast<Eigen::Index>(rows.size()) + 1, n * n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    out.row(static_cast<Eigen::Index>(r)) = b.row((rows[r].first - 1) * n + rows[r].second - 1);
  out.row(static_cast<Eigen::Index>(rows.size())) = b.row(n * n);
  return out;
}

/// Jacobian of the parametrization (lambda, omega) -> sigma.
/// `extended` has one column per ordered (a, b); `reduced` keeps a <= b.
struct JacobianBundle {
  DirectedGraph graph{1, {}};
  std::vector<Edge> row_edges;       // final row is omega
  std::vector<Edge> extended_cols;   // ordered (a, b), row-major
  std::vector<Edge> reduced_cols;    // a <= b, row-major
  Matrix extended;                   // (E_G + 1) x n^2
  Matrix reduced;                    // (E_G + 1) x n(n+1)/2
};

/// Evaluates psi_G(B) (I - L (x) L)^{-1} by LU solve against the transposed
/// system. Throws SingularSystemError on a singular draw.
inline JacobianBundle extended_jacobian(const VarParameters& p) {
  const int n = p.graph.node_count();
  const StationaryCovariance sigma = solve_stationary(p);
  const Matrix psi_b = project_psi(p.graph, build_B(p, sigma));

  const Matrix m = Matrix::Identity(n * n, n * n) - kron(p.lambda, p.lambda);
  Eigen::PartialPivLU<Matrix> lu(m.transpose());
  if (lu.rcond() < 1e-14)
    throw SingularSystemError(
        "extended_jacobian: I - L (x) L is numerically singular; re-draw parameters");

  JacobianBundle out;
  out.graph = p.graph;
  out.row_edges = jacobian_row_edges(p.graph);
  out.extended = lu.solve(psi_b.transpose()).transpose();
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b) out.extended_cols.push_back({a, b});
  for (int a = 1; a <= n; ++a)
    for (int b = a; b <= n; ++b) out.reduced_cols.push_back({a, b});
  out.reduced.resize(out.extended.rows(), static_cast<Eigen::Index>(out.reduced_cols.size()));
  for (std::size_t c = 0; c < out.reduced_cols.size(); ++c) {
    const auto& [a, b] = out.reduced_cols[c];
    out.reduced.col(static_cast<Eigen::Index>(c)) = out.extended.col((a - 1) * n + b - 1);
  }
  return out;
}

struct GenericRankReport {
  int rank = 0;
  int trials = 0;
  /// Ratio of the smallest accepted to the largest rejected singular value
  /// for the best trial; +inf when nothing was rejected.
  double singular_value_gap = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> seeds_used;
};

/// Numerical rank of the reduced Jacobian at generic parameters, maximized
/// over independent draws (per-trial seeds are seed + trial index). The rank
/// can only drop on a measure-zero set, so the max estimates the generic
/// value.
inline GenericRankReport generic_rank(const DirectedGraph& g, int trials = 5,
                                      std::uint64_t seed = 0, double rank_tol = 1e-8) {
  if (trials < 1) throw InputError("generic_rank: trials must be >= 1");
  GenericRankReport report;
  report.trials = trials;
  bool any_success = false;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(t);
    report.seeds_used.push_back(s);
    try {
      const auto bundle = extended_jacobian(sample_generic_parameters(g, s));
      const auto nr = numerical_rank(bundle.reduced, rank_tol);
      any_success = true;
      if (nr.rank > report.rank) {
        report.rank = nr.rank;
        report.singular_value_gap = nr.gap;
      }
    } catch (const SingularSystemError&) {
      continue;
    }
  }
  if (!any_success)
    throw SingularSystemError("generic_rank: every trial hit a singular system");
  return report;
}

enum class DimProvenance { formula, numeric };

struct ModelDimension {
  int value = 0;
  DimProvenance provenance = DimProvenance::formula;
};

/// Model dimension: min{E_G + 1, comember pair count} for multi-edge-free
/// graphs, otherwise the sampled generic rank.
inline ModelDimension dimension(const DirectedGraph& g, int trials = 5,
                                std::uint64_t seed = 0, double rank_tol = 1e-8) {
  const long long n_r = g.edge_count_with_loops() + 1;
  const long long n_c = comembership_pair_count(g);
  ModelDimension out;
  if (!has_multi_edge(g)) {
    out.value = static_cast<int>(std::min(n_r, n_c));
    out.provenance = DimProvenance::formula;
  } else {
    out.value = generic_rank(g, trials, seed, rank_tol).rank;
    out.provenance = DimProvenance::numeric;
  }
  if (out.value < g.node_count() || out.value > std::min(n_r, n_c))
    throw SingularSystemError("dimension: rank estimate escaped its bounds; re-run with more trials");
  return out;
}

/// Raw linear-matroid query: are the selected columns of m linearly
/// independent (numerical rank equals the selection size)?
inline bool columns_independent(const Matrix& m, const std::vector<int>& cols,
                                double rank_tol = 1e-8) {
  if (cols.empty()) return true;
  Matrix sub(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c] < 0 || cols[c] >= m.cols())
      throw InputError("columns_independent: column index out of range");
    sub.col(static_cast<Eigen::Index>(c)) = m.col(cols[c]);
  }
  return numerical_rank(sub, rank_tol).rank == static_cast<int>(cols.size());
}

/// Generic independence of the Jacobian columns sigma_{ab} for the given
/// unordered pairs: true iff the columns are independent at some draw.
inline bool matroid_independent(const DirectedGraph& g, std::vector<Edge> pairs,
                                int trials = 5, std::uint64_t seed = 0,
                                double rank_tol = 1e-8) {
  const int n = g.node_count();
  for (auto& [a, b] : pairs) {
    if (a < 1 || a > n || b < 1 || b > n)
      throw InputError("matroid_independent: pair out of range");
    if (a > b) std::swap(a, b);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  if (pairs.empty()) return true;

  bool any_success = false;
  for (int t = 0; t < trials; ++t) {
    try {
      const auto bundle = extended_jacobian(
          sample_generic_parameters(g, seed + static_cast<std::uint64_t>(t)));
      any_success = true;
      std::vector<int> cols;
      for (const auto& [a, b] : pairs) {
        const auto it = std::lower_bound(bundle.reduced_cols.begin(),
                                         bundle.reduced_cols.end(), Edge{a, b});
        cols.push_back(static_cast<int>(it - bundle.reduced_cols.begin()));
      }
      if (columns_independent(bundle.reduced, cols, rank_tol)) return true;
    } catch (const SingularSystemError&) {
      continue;
    }
  }
  if (!any_success)
    throw SingularSystemError("matroid_independent: every trial hit a singular system");
  return false;
}

namespace detail {
inline double b_g_lambda_entry(const Matrix& sl, int i, int j, int a, int b) {
  double v = 0.0;
  if (j == a) v += sl(i - 1, b - 1) * sl(j - 1, j - 1) - sl(i - 1, j - 1) * sl(j - 1, b - 1);
  if (j == b) v += sl(i - 1, a - 1) * sl(j - 1, j - 1) - sl(i - 1, j - 1) * sl(j - 1, a - 1);
  return v;
}
}  // namespace detail

/// Square certificate matrix of size E_G' + 1 for the case where the row
/// count E_G + 1 does not exceed the nonzero-column count. Rows are the
/// off-diagonal edges (lexicographic) plus omega; columns are the matching
/// unordered pairs plus `extra_pair`, which must be a non-adjacent comember
/// pair. Generic full rank certifies a full-row-rank Jacobian.
inline Matrix build_B_G(const DirectedGraph& g, const VarParameters& p,
                        const StationaryCovariance& sigma, Edge extra_pair) {
  if (has_multi_edge(g)) throw InputError("build_B_G: graph must be multi-edge-free");
  if (!(p.graph == g)) throw InputError("build_B_G: parameters belong to a different graph");
  auto [k, l] = extra_pair;
  if (k > l) std::swap(k, l);
  if (k < 1 || l > g.node_count() || k == l)
    throw InputError("build_B_G: extra pair out of range");
  if (g.contains_edge(k, l) || g.contains_edge(l, k))
    throw InputError("build_B_G: extra pair must not be adjacent");
  if (!comembership(maximal_classes(g), k, l))
    throw InputError("build_B_G: extra pair must be comembers");

  const Matrix sl = sigma.sigma * p.lambda;
  const auto& es = g.edges();
  const int m = g.edge_count();
  std::vector<Edge> cols;
  for (const auto& [i, j] : es) cols.push_back({std::min(i, j), std::max(i, j)});
  cols.push_back({k, l});

  Matrix out(m + 1, m + 1);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c <= m; ++c)
      out(r, c) = detail::b_g_lambda_entry(sl, es[r].first, es[r].second,
                                           cols[c].first, cols[c].second);
  for (int c = 0; c <= m; ++c) {
    const auto& [a, b] = cols[c];
    out(m, c) = sl(a - 1, b - 1) / sl(a - 1, a - 1) + sl(b - 1, a - 1) / sl(b - 1, b - 1);
  }
  return out;
}

/// Tries every admissible extra pair; true iff some certificate is full
/// rank at the given draw. Full rank of a single certificate is all the
/// full-row-rank conclusion needs, but which pair exposes it can depend on
/// the pair when several are available.
inline bool any_full_rank_B_G(const DirectedGraph& g, const VarParameters& p,
                              const StationaryCovariance& sigma, double rank_tol = 1e-8) {
  const auto candidates = nonadjacent_comember_pairs(g);
  if (candidates.empty())
    throw InputError("any_full_rank_B_G: no non-adjacent comember pair exists");
  for (const auto& pair : candidates) {
    const Matrix bg = build_B_G(g, p, sigma, pair);
    if (numerical_rank(bg, rank_tol).rank == bg.rows()) return true;
  }
  return false;
}

/// Square certificate matrix of size E_G' for the opposite case (no
/// non-adjacent comember pair exists). Rows are the off-diagonal edges,
/// columns the matching unordered pairs; the omega row is absent. Generic
/// full rank certifies rank equal to the nonzero-column count.
inline Matrix build_B_G_prime(const DirectedGraph& g, const VarParameters& p,
                              const StationaryCovariance& sigma) {
  if (has_multi_edge(g)) throw InputError("build_B_G_prime: graph must be multi-edge-free");
  if (!(p.graph == g)) throw InputError("build_B_G_prime: parameters belong to a different graph");
  if (!nonadjacent_comember_pairs(g).empty())
    throw InputError("build_B_G_prime: graph has a non-adjacent comember pair; use build_B_G");

  const Matrix sl = sigma.sigma * p.lambda;
  const auto& es = g.edges();
  const int m = g.edge_count();
  Matrix out(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c)
      out(r, c) = detail::b_g_lambda_entry(sl, es[r].first, es[r].second,
                                           std::min(es[c].first, es[c].second),
                                           std::max(es[c].first, es[c].second));
  return out;
}

}  // namespace varid
