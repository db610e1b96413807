#pragma once

#include <optional>

#include "varid/jacobian.hpp"

namespace varid {

enum class Verdict { identifiable, criteria_not_satisfied };

enum class Criterion {
  none,
  different_dimension,
  same_dim_different_maxclasses,
  cross_maxclass_condition,
};

/// Pairwise decision. The criteria are sufficient only: a pair that fails
/// them is reported as criteria_not_satisfied, never as "not identifiable".
struct IdentifiabilityVerdict {
  std::pair<int, int> pair{0, 1};  // 0-based indices into the family
  Verdict verdict = Verdict::criteria_not_satisfied;
  Criterion criterion = Criterion::none;
  /// For the cross condition: comember pair of the first graph only, and of
  /// the second graph only (lexicographically smallest).
  std::optional<Edge> witness_first;
  std::optional<Edge> witness_second;
  ModelDimension dim_first, dim_second;
};

struct IdentifyOptions {
  /// Accept numerically estimated dimensions in the dimension criterion.
  /// Off by default: numeric equality is tolerance-laden, so the cascade
  /// then rests on exact graph combinatorics alone.
  bool trust_numeric_dims = false;
  int trials = 5;
  std::uint64_t seed = 0;
  double rank_tol = 1e-8;
};

/// Decision cascade: (1) distinct known dimensions; (2) equal exact
/// dimensions but different class sets; (3) comember pairs private to each
/// side (applies regardless of dimension); otherwise not satisfied.
inline IdentifiabilityVerdict identify_pair(const DirectedGraph& g1, const DirectedGraph& g2,
                                            const IdentifyOptions& opt = {}) {
  if (g1.node_count() != g2.node_count())
    throw InputError("identify_pair: graphs must share the node count");

  IdentifiabilityVerdict v;
  v.dim_first = dimension(g1, opt.trials, opt.seed, opt.rank_tol);
  v.dim_second = dimension(g2, opt.trials, opt.seed + static_cast<std::uint64_t>(opt.trials),
                           opt.rank_tol);

  const auto mc1 = maximal_classes(g1);
  const auto mc2 = maximal_classes(g2);
  const auto pairs1 = comember_pairs_offdiag(mc1);
  const auto pairs2 = comember_pairs_offdiag(mc2);
  std::vector<Edge> only1, only2;
  std::set_difference(pairs1.begin(), pairs1.end(), pairs2.begin(), pairs2.end(),
                      std::back_inserter(only1));
  std::set_difference(pairs2.begin(), pairs2.end(), pairs1.begin(), pairs1.end(),
                      std::back_inserter(only2));

  const bool both_formula = v.dim_first.provenance == DimProvenance::formula &&
                            v.dim_second.provenance == DimProvenance::formula;
  const bool dims_usable = both_formula || opt.trust_numeric_dims;

  if (dims_usable && v.dim_first.value != v.dim_second.value) {
    v.verdict = Verdict::identifiable;
    v.criterion = Criterion::different_dimension;
  } else if (both_formula && v.dim_first.value == v.dim_second.value &&
             !(only1.empty() && only2.empty())) {
    v.verdict = Verdict::identifiable;
    v.criterion = Criterion::same_dim_different_maxclasses;
  } else if (!only1.empty() && !only2.empty()) {
    v.verdict = Verdict::identifiable;
    v.criterion = Criterion::cross_maxclass_condition;
    v.witness_first = only1.front();
    v.witness_second = only2.front();
  }
  return v;
}

struct FamilyReport {
  int family_size = 0;
  std::vector<IdentifiabilityVerdict> pairs;  // unordered pairs, (i, j) with i < j
  bool family_identifiable = false;
};

inline FamilyReport identify_family(const std::vector<DirectedGraph>& gs,
                                    const IdentifyOptions& opt = {}) {
  const int k = static_cast<int>(gs.size());
  if (k < 2) throw InputError("identify_family: need at least two graphs");
  for (const auto& g : gs)
    if (g.node_count() != gs.front().node_count())
      throw InputError("identify_family: graphs must share the node count");

  FamilyReport report;
  report.family_size = k;
  report.family_identifiable = true;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      IdentifyOptions pair_opt = opt;
      pair_opt.seed = opt.seed + static_cast<std::uint64_t>((i * k + j) * 2 * opt.trials);
      auto v = identify_pair(gs[i], gs[j], pair_opt);
      v.pair = {i, j};
      report.family_identifiable =
          report.family_identifiable && v.verdict == Verdict::identifiable;
      report.pairs.push_back(std::move(v));
    }
  return report;
}

/// Numerically confirms the matroid mechanism behind a maximal-class
/// verdict: a column that is nonzero in one model and zero in the other,
/// paired with an independent partner column, must form a set that is
/// independent in the first matroid and dependent in the second. Checks
/// every applicable direction.
inline bool matroid_witness_check(const DirectedGraph& g1, const DirectedGraph& g2,
                                  const IdentifiabilityVerdict& v, std::uint64_t seed,
                                  int trials = 5, double rank_tol = 1e-8) {
  if (v.criterion != Criterion::same_dim_different_maxclasses &&
      v.criterion != Criterion::cross_maxclass_condition)
    throw InputError("matroid_witness_check: verdict must rest on a maximal-class criterion");

  const auto pairs1 = comember_pairs_offdiag(maximal_classes(g1));
  const auto pairs2 = comember_pairs_offdiag(maximal_classes(g2));
  std::vector<Edge> only1, only2;
  std::set_difference(pairs1.begin(), pairs1.end(), pairs2.begin(), pairs2.end(),
                      std::back_inserter(only1));
  std::set_difference(pairs2.begin(), pairs2.end(), pairs1.begin(), pairs1.end(),
                      std::back_inserter(only2));

  auto check_direction = [&](const DirectedGraph& gx, const DirectedGraph& gy,
                             const std::vector<Edge>& private_pairs,
                             std::uint64_t s) -> bool {
    const Edge ab = private_pairs.front();
    // Candidate partners: every nonzero column of gx's Jacobian, i.e. every
    // comember pair including the diagonal ones.
    std::vector<Edge> candidates;
    for (int i = 1; i <= gx.node_count(); ++i) candidates.push_back({i, i});
    const auto off = comember_pairs_offdiag(maximal_classes(gx));
    candidates.insert(candidates.end(), off.begin(), off.end());
    std::sort(candidates.begin(), candidates.end());
    for (const auto& cd : candidates) {
      if (cd == ab) continue;
      if (matroid_independent(gx, {ab, cd}, trials, s, rank_tol))
        return !matroid_independent(gy, {ab, cd}, trials, s + trials, rank_tol);
    }
    return false;
  };

  bool ok = true;
  bool any_direction = false;
  if (!only1.empty()) {
    any_direction = true;
    ok = ok && check_direction(g1, g2, only1, seed);
  }
  if (!only2.empty()) {
    any_direction = true;
    ok = ok && check_direction(g2, g1, only2, seed + 1000);
  }
  return any_direction && ok;
}

}  // namespace varid
