#pragma once

#include "varid/stationary.hpp"

namespace varid::fixtures {

/// Six nodes, a 3-cycle source {1,2,3} feeding 4 and 6, and a second source
/// node 5 feeding 4 and 6. Maximal classes {1,2,3,4,6} and {4,5,6}.
inline DirectedGraph two_source_network() {
  return DirectedGraph(6, {{1, 2}, {2, 3}, {3, 1}, {3, 4}, {5, 4}, {5, 6}, {4, 6}});
}

/// Chain with a fork: 1 -> 2 -> {3, 4}, 3 -> 5. Single maximal class.
inline DirectedGraph chain_fork() {
  return DirectedGraph(5, {{1, 2}, {2, 3}, {2, 4}, {3, 5}});
}

/// Three nodes with edges (1,3) and (2,1); the small worked Jacobian graph.
inline DirectedGraph worked_jacobian_graph() {
  return DirectedGraph(3, {{1, 3}, {2, 1}});
}

/// Five nodes whose classes {1,2,3,4} and {3,5} overlap at node 3.
/// Multi-edge-free with 4 off-diagonal edges: model dimension 10.
inline DirectedGraph overlap_dimension_graph() {
  return DirectedGraph(5, {{1, 2}, {2, 3}, {2, 4}, {5, 3}});
}

/// Pair distinguished by the cross maximal-class condition. The first graph
/// carries the multi-edge 1 <-> 2 (classes {1,2,3}, {3,4}); the second is
/// multi-edge-free (classes {1,2}, {2,3,4}).
inline std::pair<DirectedGraph, DirectedGraph> crossed_class_pair() {
  return {DirectedGraph(4, {{1, 2}, {2, 1}, {2, 3}, {4, 3}}),
          DirectedGraph(4, {{1, 2}, {3, 2}, {3, 4}})};
}

/// Four graphs on four nodes, pairwise identifiable: dimensions 7/8/8 for
/// the first three, the fourth carries a multi-edge and is separated by the
/// cross condition.
inline std::vector<DirectedGraph> identifiable_family() {
  return {DirectedGraph(4, {{2, 1}, {3, 1}, {4, 1}}),
          DirectedGraph(4, {{1, 3}, {2, 3}, {2, 4}}),
          DirectedGraph(4, {{1, 2}, {3, 2}, {4, 3}}),
          DirectedGraph(4, {{1, 2}, {2, 1}, {2, 3}, {4, 3}})};
}

/// Two graphs with identical class sets and equal dimensions: the criteria
/// cannot separate them.
inline std::pair<DirectedGraph, DirectedGraph> same_footprint_pair() {
  return {DirectedGraph(3, {{1, 2}, {2, 3}}), DirectedGraph(3, {{1, 2}, {1, 3}})};
}

/// A multi-edge pair the criteria cannot separate: identical class sets,
/// first graph's dimension only numeric.
inline std::pair<DirectedGraph, DirectedGraph> multi_edge_unresolved_pair() {
  return {DirectedGraph(2, {{1, 2}, {2, 1}}), DirectedGraph(2, {{1, 2}})};
}

/// Ten-node feeding web: resources 1..5 each feed a subset of consumers
/// 6..10; one maximal class per resource.
inline DirectedGraph trophic_web() {
  return DirectedGraph(10, {{1, 6}, {1, 7}, {2, 6}, {2, 7}, {2, 8}, {2, 9},
                            {3, 6}, {3, 7}, {3, 8}, {3, 9}, {3, 10},
                            {4, 6}, {5, 6}});
}

/// Two disjoint fans: classes {1,2,3} and {4,5,6} share no node, so the
/// halves never influence each other.
inline DirectedGraph disjoint_fans() {
  return DirectedGraph(6, {{1, 2}, {1, 3}, {4, 5}, {4, 6}});
}

/// Overlapping fans: classes {1,2,3,6} and {3,4,5,6}.
inline DirectedGraph linked_fans() {
  return DirectedGraph(6, {{1, 2}, {1, 3}, {1, 6}, {4, 3}, {4, 5}, {4, 6}});
}

/// Two 3x3 interaction matrices with different supports that produce the
/// same stationary covariance (to printing precision), with omega = 1.
struct EqualCovariancePair {
  VarParameters first, second;
  Matrix printed_sigma;
};

inline EqualCovariancePair equal_covariance_pair() {
  DirectedGraph g1(3, {{1, 2}, {3, 2}});
  Matrix l1(3, 3);
  l1 << 0.50, 0.70, 0.00,
        0.00, 0.90, 0.00,
        0.00, 0.80, 0.40;
  DirectedGraph g2(3, {{1, 2}, {1, 3}, {2, 3}});
  Matrix l2(3, 3);
  l2 << 0.50, 0.67, -0.01,
        0.00, 0.94,  0.02,
        0.00, 0.00,  0.38;
  Matrix sigma(3, 3);
  sigma << 1.33, 0.85, 0.00,
           0.85, 22.85, 0.60,
           0.00, 0.60, 1.19;
  return {{std::move(g1), std::move(l1), 1.0}, {std::move(g2), std::move(l2), 1.0}, sigma};
}

/// 3x3 support with zeros exactly at (1,3)/(3,1); reconstructs to the
/// classes {1,2} and {2,3} and a unique graph {(1,2),(3,2)}.
inline SupportPattern sparse_support_pattern() {
  SupportPattern s;
  s.n = 3;
  s.threshold_used = 0.0;
  s.nonzero = BoolMatrix::Constant(3, 3, true);
  s.nonzero(0, 2) = s.nonzero(2, 0) = false;
  return s;
}

/// Small matrix whose column matroid excludes {1, 4}: the fourth column is
/// twice the first.
inline Matrix matroid_demo_matrix() {
  Matrix a(4, 4);
  a << 2, 0, 2, 4,
       0, 1, 1, 0,
       0, 0, 1, 0,
       4, 0, 4, 8;
  return a;
}

}  // namespace varid::fixtures
