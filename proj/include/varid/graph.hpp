#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "varid/common.hpp"

namespace varid {

using Edge = std::pair<int, int>;

/// Directed graph on nodes 1..n. Every node carries an implicit self-loop;
/// self-loops are never stored, `edges()` holds only the off-diagonal pairs,
/// sorted and duplicate-free. Immutable after construction.
class DirectedGraph {
 public:
  DirectedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ < 1) throw InputError("DirectedGraph: node count must be positive");
    for (const auto& [i, j] : edges_) {
      if (i < 1 || i > n_ || j < 1 || j > n_)
        throw InputError("DirectedGraph: edge endpoint out of range");
      if (i == j)
        throw InputError("DirectedGraph: self-loops are implicit and must not be listed");
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  int node_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// True for self-loops (always present) and listed off-diagonal edges.
  bool contains_edge(int i, int j) const {
    if (i < 1 || i > n_ || j < 1 || j > n_) return false;
    if (i == j) return true;
    return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
  }

  /// Edge count including the n implicit self-loops.
  int edge_count_with_loops() const { return static_cast<int>(edges_.size()) + n_; }

  /// Off-diagonal edge count.
  int edge_count() const { return static_cast<int>(edges_.size()); }

  bool operator==(const DirectedGraph& o) const { return n_ == o.n_ && edges_ == o.edges_; }

 private:
  int n_;
  std::vector<Edge> edges_;
};

struct SccDecomposition {
  /// Partition of [n]; nodes ascending within a component, components
  /// ordered by smallest member.
  std::vector<std::vector<int>> components;
  /// 1-based node -> 0-based component index (entry 0 unused).
  std::vector<int> component_of;
  /// Acyclic graph on the components (1-based component labels).
  DirectedGraph condensation{1, {}};
};

/// Strongly connected components plus the condensation, order-canonicalized.
inline SccDecomposition scc_decompose(const DirectedGraph& g) {
  const int n = g.node_count();
  std::vector<std::vector<int>> adj(n), radj(n);
  for (const auto& [i, j] : g.edges()) {
    adj[i - 1].push_back(j - 1);
    radj[j - 1].push_back(i - 1);
  }

  // Kosaraju, iterative. First pass: finishing order on g.
  std::vector<int> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
    seen[s] = 1;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      if (idx < adj[v].size()) {
        int w = adj[v][idx++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }

  // Second pass on the reverse graph in reverse finishing order.
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] >= 0) continue;
    std::vector<int> stack{*it};
    comp[*it] = ncomp;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : radj[v])
        if (comp[w] < 0) {
          comp[w] = ncomp;
          stack.push_back(w);
        }
    }
    ++ncomp;
  }

  // Canonical order: components sorted by smallest member.
  std::vector<std::vector<int>> raw(ncomp);
  for (int v = 0; v < n; ++v) raw[comp[v]].push_back(v + 1);
  for (auto& c : raw) std::sort(c.begin(), c.end());
  std::sort(raw.begin(), raw.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  SccDecomposition out;
  out.components = std::move(raw);
  out.component_of.assign(n + 1, -1);
  for (std::size_t c = 0; c < out.components.size(); ++c)
    for (int v : out.components[c]) out.component_of[v] = static_cast<int>(c);

  std::set<Edge> cedges;
  for (const auto& [i, j] : g.edges()) {
    int a = out.component_of[i], b = out.component_of[j];
    if (a != b) cedges.insert({a + 1, b + 1});
  }
  out.condensation = DirectedGraph(static_cast<int>(out.components.size()),
                                   {cedges.begin(), cedges.end()});
  return out;
}

/// 0-based indices of the condensation nodes with in-degree zero, ascending.
inline std::vector<int> sources(const SccDecomposition& d) {
  const int k = d.condensation.node_count();
  std::vector<char> has_in(k, 0);
  for (const auto& [a, b] : d.condensation.edges()) has_in[b - 1] = 1;
  std::vector<int> out;
  for (int c = 0; c < k; ++c)
    if (!has_in[c]) out.push_back(c);
  return out;
}

struct MaximalClassSet {
  int n = 0;
  /// Canonical: nodes ascending within a class, classes in lexicographic order.
  std::vector<std::vector<int>> classes;
  /// Source component per class; empty when the set was not derived from a
  /// graph (e.g. parsed from a file).
  std::vector<std::vector<int>> sources;

  bool operator==(const MaximalClassSet& o) const {
    return n == o.n && classes == o.classes;
  }
};

/// One class per source of the condensation: the source component together
/// with everything reachable from it.
inline MaximalClassSet maximal_classes(const DirectedGraph& g) {
  const auto d = scc_decompose(g);
  const int k = d.condensation.node_count();
  std::vector<std::vector<int>> cadj(k);
  for (const auto& [a, b] : d.condensation.edges()) cadj[a - 1].push_back(b - 1);

  std::vector<std::pair<std::vector<int>, std::vector<int>>> pairs;  // (class, source)
  for (int s : sources(d)) {
    std::vector<char> seen(k, 0);
    std::vector<int> stack{s};
    seen[s] = 1;
    std::vector<int> nodes;
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      nodes.insert(nodes.end(), d.components[c].begin(), d.components[c].end());
      for (int w : cadj[c])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    std::sort(nodes.begin(), nodes.end());
    pairs.emplace_back(std::move(nodes), d.components[s]);
  }
  std::sort(pairs.begin(), pairs.end());

  MaximalClassSet out;
  out.n = g.node_count();
  for (auto& [cls, src] : pairs) {
    out.classes.push_back(std::move(cls));
    out.sources.push_back(std::move(src));
  }
  return out;
}

/// True iff some class contains both i and j (always true for i == j).
inline bool comembership(const MaximalClassSet& mc, int i, int j) {
  if (i < 1 || i > mc.n || j < 1 || j > mc.n)
    throw InputError("comembership: node index out of range");
  if (i == j) return true;
  for (const auto& c : mc.classes)
    if (std::binary_search(c.begin(), c.end(), i) &&
        std::binary_search(c.begin(), c.end(), j))
      return true;
  return false;
}

/// n x n boolean comembership relation; diagonal always true.
inline BoolMatrix comembership_matrix(const MaximalClassSet& mc) {
  BoolMatrix m = BoolMatrix::Constant(mc.n, mc.n, false);
  for (int i = 0; i < mc.n; ++i) m(i, i) = true;
  for (const auto& c : mc.classes)
    for (int a : c)
      for (int b : c) m(a - 1, b - 1) = true;
  return m;
}

/// Unordered comember pairs {i, j} with i < j, sorted.
inline std::vector<Edge> comember_pairs_offdiag(const MaximalClassSet& mc) {
  std::set<Edge> s;
  for (const auto& c : mc.classes)
    for (std::size_t x = 0; x < c.size(); ++x)
      for (std::size_t y = x + 1; y < c.size(); ++y) s.insert({c[x], c[y]});
  return {s.begin(), s.end()};
}

/// Number of unordered comember pairs {a, b} including a == b. Equals the
/// count of nonzero columns of the model Jacobian.
inline long long comembership_pair_count(const DirectedGraph& g) {
  const auto mc = maximal_classes(g);
  return g.node_count() + static_cast<long long>(comember_pairs_offdiag(mc).size());
}

/// True iff both (i, j) and (j, i) are present for some i != j.
inline bool has_multi_edge(const DirectedGraph& g) {
  for (const auto& [i, j] : g.edges())
    if (i < j && g.contains_edge(j, i)) return true;
  return false;
}

/// Unordered pairs {k, l}, k < l, not joined by an edge in either direction
/// but lying in a common maximal class.
inline std::vector<Edge> nonadjacent_comember_pairs(const DirectedGraph& g) {
  const auto mc = maximal_classes(g);
  std::vector<Edge> out;
  for (const auto& [k, l] : comember_pairs_offdiag(mc))
    if (!g.contains_edge(k, l) && !g.contains_edge(l, k)) out.push_back({k, l});
  return out;
}

/// True iff the induced subgraph of mc_class admits a spanning tree rooted at
/// `source`, i.e. every class member is reachable from `source` inside the
/// class. `mc_class` must be a maximal class of g and `source` one of its
/// source nodes.
inline bool rooted_spanning_tree_check(const DirectedGraph& g,
                                       std::vector<int> mc_class, int source) {
  std::sort(mc_class.begin(), mc_class.end());
  const auto mc = maximal_classes(g);
  int which = -1;
  for (std::size_t c = 0; c < mc.classes.size(); ++c)
    if (mc.classes[c] == mc_class) which = static_cast<int>(c);
  if (which < 0) throw InputError("rooted_spanning_tree_check: not a maximal class of g");
  const auto& src_comp = mc.sources[which];
  if (!std::binary_search(src_comp.begin(), src_comp.end(), source))
    throw InputError("rooted_spanning_tree_check: node is not a source of the class");

  std::vector<char> inside(g.node_count() + 1, 0), seen(g.node_count() + 1, 0);
  for (int v : mc_class) inside[v] = 1;
  std::vector<std::vector<int>> adj(g.node_count() + 1);
  for (const auto& [a, b] : g.edges())
    if (inside[a] && inside[b]) adj[a].push_back(b);
  std::vector<int> stack{source};
  seen[source] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v]) {
      if (seen[w]) continue;
      seen[w] = 1;
      ++reached;
      stack.push_back(w);
    }
  }
  return reached == mc_class.size();
}

/// All digraphs on n nodes (off-diagonal edge subsets). With
/// multi_edge_free, each unordered pair contributes none/forward/backward.
/// Intended for exhaustive checks at small n.
inline std::vector<DirectedGraph> all_digraphs(int n, bool multi_edge_free = false) {
  std::vector<Edge> slots;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j && (!multi_edge_free || i < j)) slots.push_back({i, j});

  std::vector<DirectedGraph> out;
  if (!multi_edge_free) {
    const std::size_t total = 1ull << slots.size();
    out.reserve(total);
    for (std::size_t mask = 0; mask < total; ++mask) {
      std::vector<Edge> es;
      for (std::size_t b = 0; b < slots.size(); ++b)
        if (mask & (1ull << b)) es.push_back(slots[b]);
      out.emplace_back(n, std::move(es));
    }
  } else {
    std::size_t total = 1;
    for (std::size_t b = 0; b < slots.size(); ++b) total *= 3;
    out.reserve(total);
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<Edge> es;
      std::size_t c = code;
      for (const auto& [i, j] : slots) {
        switch (c % 3) {
          case 1: es.push_back({i, j}); break;
          case 2: es.push_back({j, i}); break;
          default: break;
        }
        c /= 3;
      }
      out.emplace_back(n, std::move(es));
    }
  }
  return out;
}

}  // namespace varid
