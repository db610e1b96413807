#pragma once

#include <cstdint>
#include <numeric>

#include "varid/stationary.hpp"

namespace varid {

/// Output of the support -> maximal classes reconstruction.
struct RecoveryReport {
  MaximalClassSet classes;
  /// Per-node candidate sets C_i = { j : support(i, j) }, in node order.
  std::vector<std::vector<int>> candidate_sets;
  /// Candidates dropped because they contain a zero pair, deduplicated.
  std::vector<std::vector<int>> removed_sets;
  /// Whether the support pattern, read as an undirected graph, is connected.
  /// Disconnected inputs are processed normally but flagged.
  bool weakly_connected = true;
};

/// Reconstructs the set of maximal classes from the support of the
/// stationary covariance: per-node candidates, then drop every candidate
/// containing a pair with zero support, then deduplicate.
inline RecoveryReport maxclasses_from_support(const SupportPattern& s) {
  const int n = s.n;
  for (int i = 0; i < n; ++i)
    if (!s.nonzero(i, i))
      throw InputError("maxclasses_from_support: diagonal support entries must be nonzero");

  RecoveryReport out;
  for (int i = 0; i < n; ++i) {
    std::vector<int> c;
    for (int j = 0; j < n; ++j)
      if (s.nonzero(i, j)) c.push_back(j + 1);
    out.candidate_sets.push_back(std::move(c));
  }

  std::vector<std::vector<int>> kept;
  std::set<std::vector<int>> removed;
  for (const auto& c : out.candidate_sets) {
    bool ok = true;
    for (std::size_t x = 0; x < c.size() && ok; ++x)
      for (std::size_t y = x + 1; y < c.size() && ok; ++y)
        if (!s.nonzero(c[x] - 1, c[y] - 1)) ok = false;
    if (ok)
      kept.push_back(c);
    else
      removed.insert(c);
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  out.removed_sets.assign(removed.begin(), removed.end());
  out.classes.n = n;
  out.classes.classes = std::move(kept);

  // Connectivity of the undirected support graph.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (s.nonzero(i, j)) parent[find(i)] = find(j);
  for (int v = 1; v < n; ++v)
    if (find(v) != find(0)) out.weakly_connected = false;
  return out;
}

struct GraphSearchResult {
  std::vector<DirectedGraph> graphs;
  /// False when the subset enumeration was truncated by the budget or the
  /// result list by max_results.
  bool complete = true;
};

/// Enumerates the graphs whose maximal classes equal `mc`. Edges that would
/// leak out of a class, or point at a sole-membership node from outside its
/// candidate source set, are pruned up front; every surviving edge subset is
/// verified by recomputing its maximal classes. Worst case exponential in
/// the number of allowable edges, hence the subset budget.
inline GraphSearchResult graphs_from_maxclasses(const MaximalClassSet& mc,
                                                std::size_t max_results = 1024,
                                                std::uint64_t subset_budget = (1ull << 20)) {
  if (mc.classes.empty())
    throw InputError("graphs_from_maxclasses: class set must be nonempty");
  std::set<int> union_nodes;
  for (const auto& c : mc.classes) {
    if (c.empty()) throw InputError("graphs_from_maxclasses: classes must be nonempty");
    union_nodes.insert(c.begin(), c.end());
  }
  const int n = *union_nodes.rbegin();
  if (*union_nodes.begin() < 1 || static_cast<int>(union_nodes.size()) != n)
    throw InputError("graphs_from_maxclasses: class union must cover 1..n");

  MaximalClassSet target;
  target.n = n;
  target.classes = mc.classes;
  for (auto& c : target.classes) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  std::sort(target.classes.begin(), target.classes.end());
  target.classes.erase(std::unique(target.classes.begin(), target.classes.end()),
                       target.classes.end());

  // Sole-membership nodes per class: candidate sources.
  std::vector<std::vector<int>> sole(target.classes.size());
  for (std::size_t k = 0; k < target.classes.size(); ++k)
    for (int v : target.classes[k]) {
      bool elsewhere = false;
      for (std::size_t j = 0; j < target.classes.size() && !elsewhere; ++j)
        if (j != k &&
            std::binary_search(target.classes[j].begin(), target.classes[j].end(), v))
          elsewhere = true;
      if (!elsewhere) sole[k].push_back(v);
    }

  std::set<Edge> forbidden;
  for (int u = 1; u <= n; ++u)
    for (int v = 1; v <= n; ++v) {
      if (u == v) continue;
      for (std::size_t k = 0; k < target.classes.size(); ++k) {
        const auto& cls = target.classes[k];
        const bool u_in = std::binary_search(cls.begin(), cls.end(), u);
        const bool v_in = std::binary_search(cls.begin(), cls.end(), v);
        if (u_in && !v_in) forbidden.insert({u, v});
        const bool v_sole = std::binary_search(sole[k].begin(), sole[k].end(), v);
        const bool u_sole = std::binary_search(sole[k].begin(), sole[k].end(), u);
        if (v_sole && !u_sole) forbidden.insert({u, v});
      }
    }

  std::vector<Edge> allowed;
  for (int u = 1; u <= n; ++u)
    for (int v = 1; v <= n; ++v)
      if (u != v && !forbidden.count({u, v})) allowed.push_back({u, v});

  GraphSearchResult out;
  const std::size_t p = allowed.size();
  std::uint64_t total;
  if (p >= 63 || (1ull << p) > subset_budget) {
    total = subset_budget;
    out.complete = false;
  } else {
    total = 1ull << p;
  }

  std::size_t found = 0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<Edge> es;
    for (std::size_t b = 0; b < p; ++b)
      if (mask & (1ull << b)) es.push_back(allowed[b]);
    DirectedGraph g(n, std::move(es));
    if (maximal_classes(g) == target) {
      ++found;
      if (out.graphs.size() < max_results) out.graphs.push_back(std::move(g));
    }
  }
  if (found > max_results) out.complete = false;
  std::sort(out.graphs.begin(), out.graphs.end(),
            [](const DirectedGraph& a, const DirectedGraph& b) { return a.edges() < b.edges(); });
  return out;
}

enum class RoundtripStatus { pass, fail, inconclusive };

/// Checks that g is recovered by the class-set reconstruction of its own
/// maximal classes and that every reconstructed graph reproduces them.
/// Returns inconclusive when the enumeration would exceed the budget.
inline RoundtripStatus roundtrip_check(const DirectedGraph& g) {
  const auto mc = maximal_classes(g);
  const auto result = graphs_from_maxclasses(
      mc, std::numeric_limits<std::size_t>::max(), (1ull << 20));
  if (!result.complete) return RoundtripStatus::inconclusive;
  bool seen_self = false;
  for (const auto& cand : result.graphs) {
    if (cand == g) seen_self = true;
    if (!(maximal_classes(cand) == mc)) return RoundtripStatus::fail;
  }
  return seen_self ? RoundtripStatus::pass : RoundtripStatus::fail;
}

}  // namespace varid
