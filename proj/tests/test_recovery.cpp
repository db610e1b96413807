#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "varid/fixtures.hpp"
#include "varid/recovery.hpp"
#include "varid/selfcheck.hpp"

using namespace varid;

namespace {
SupportPattern all_true(int n) {
  SupportPattern s;
  s.n = n;
  s.nonzero = BoolMatrix::Constant(n, n, true);
  return s;
}

SupportPattern diagonal_only(int n) {
  SupportPattern s;
  s.n = n;
  s.nonzero = BoolMatrix::Constant(n, n, false);
  for (int i = 0; i < n; ++i) s.nonzero(i, i) = true;
  return s;
}
}  // namespace

TEST_CASE("class reconstruction from the sparse bundled pattern") {
  const auto r = maxclasses_from_support(fixtures::sparse_support_pattern());
  CHECK(r.classes.classes == std::vector<std::vector<int>>{{1, 2}, {2, 3}});
  CHECK(r.candidate_sets ==
        std::vector<std::vector<int>>{{1, 2}, {1, 2, 3}, {2, 3}});
  CHECK(r.removed_sets == std::vector<std::vector<int>>{{1, 2, 3}});
  CHECK(r.weakly_connected);
}

TEST_CASE("class reconstruction corner cases") {
  CHECK(maxclasses_from_support(all_true(3)).classes.classes ==
        std::vector<std::vector<int>>{{1, 2, 3}});
  CHECK(maxclasses_from_support(diagonal_only(3)).classes.classes ==
        std::vector<std::vector<int>>{{1}, {2}, {3}});

  auto bad = all_true(3);
  bad.nonzero(1, 1) = false;
  CHECK_THROWS_AS(maxclasses_from_support(bad), InputError);
}

TEST_CASE("disconnected support is flagged, not rejected") {
  auto s = diagonal_only(4);
  s.nonzero(0, 1) = s.nonzero(1, 0) = true;
  s.nonzero(2, 3) = s.nonzero(3, 2) = true;
  const auto r = maxclasses_from_support(s);
  CHECK_FALSE(r.weakly_connected);
  CHECK(r.classes.classes == std::vector<std::vector<int>>{{1, 2}, {3, 4}});
}

TEST_CASE("graph search for the sparse pattern finds exactly one graph") {
  const auto classes = maxclasses_from_support(fixtures::sparse_support_pattern()).classes;
  const auto result = graphs_from_maxclasses(classes);
  REQUIRE(result.complete);
  REQUIRE(result.graphs.size() == 1);
  CHECK(result.graphs[0] == DirectedGraph(3, {{1, 2}, {3, 2}}));
}

TEST_CASE("graph search corner cases") {
  MaximalClassSet single;
  single.n = 1;
  single.classes = {{1}};
  const auto r = graphs_from_maxclasses(single);
  REQUIRE(r.complete);
  REQUIRE(r.graphs.size() == 1);
  CHECK(r.graphs[0] == DirectedGraph(1, {}));

  MaximalClassSet empty;
  CHECK_THROWS_AS(graphs_from_maxclasses(empty), InputError);

  MaximalClassSet gap;
  gap.n = 3;
  gap.classes = {{1, 3}};  // node 2 missing
  CHECK_THROWS_AS(graphs_from_maxclasses(gap), InputError);
}

TEST_CASE("graph search result is canonical, complete-flagged, and verified") {
  const auto truth = maximal_classes(fixtures::two_source_network());
  const auto result =
      graphs_from_maxclasses(truth, std::numeric_limits<std::size_t>::max());
  REQUIRE(result.complete);
  REQUIRE(result.graphs.size() > 1000);  // the class set is realized many times over
  bool contains_original = false;
  for (std::size_t i = 0; i < result.graphs.size(); ++i) {
    if (result.graphs[i] == fixtures::two_source_network()) contains_original = true;
    if (i > 0) REQUIRE(result.graphs[i - 1].edges() < result.graphs[i].edges());
  }
  CHECK(contains_original);
  for (std::size_t i = 0; i < result.graphs.size(); i += 100)
    REQUIRE(maximal_classes(result.graphs[i]) == truth);

  // Truncation by max_results must clear the completeness flag.
  const auto truncated = graphs_from_maxclasses(truth, 2);
  CHECK(truncated.graphs.size() == 2);
  CHECK_FALSE(truncated.complete);

  // So must an exhausted subset budget.
  MaximalClassSet one;
  one.n = 4;
  one.classes = {{1, 2, 3, 4}};
  CHECK_FALSE(graphs_from_maxclasses(one, 1024, 16).complete);
  CHECK(graphs_from_maxclasses(one, std::numeric_limits<std::size_t>::max()).complete);
}

TEST_CASE("round-trip status on bundled graphs") {
  CHECK(roundtrip_check(fixtures::two_source_network()) == RoundtripStatus::pass);
  CHECK(roundtrip_check(DirectedGraph(3, {})) == RoundtripStatus::pass);
  CHECK(roundtrip_check(DirectedGraph(3, {{1, 2}, {2, 3}})) == RoundtripStatus::pass);
}

TEST_CASE("round-trip holds on random small graphs") {
  Rng rng(67);
  for (int t = 0; t < 30; ++t) {
    const auto g = oracles::random_digraph(1 + t % 4, rng);
    CHECK(roundtrip_check(g) == RoundtripStatus::pass);
  }
}

TEST_CASE("comembership patterns reconstruct the classes exhaustively (n <= 4)") {
  // Pure combinatorial leg of the bijection: feeding the exact comembership
  // relation through the support-based reconstruction returns the graph's
  // own maximal classes, for every digraph up to four nodes.
  for (int n = 1; n <= 4; ++n)
    for (const auto& g : all_digraphs(n)) {
      const auto mc = maximal_classes(g);
      SupportPattern s;
      s.n = n;
      s.nonzero = comembership_matrix(mc);
      REQUIRE(maxclasses_from_support(s).classes == mc);
    }
}

TEST_CASE("support recovery agrees with graph classes at generic draws") {
  Rng rng(71);
  for (int t = 0; t < 30; ++t) {
    const auto g = oracles::random_digraph(1 + t % 4, rng);
    const auto sigma = selfcheck::detail::draw_well_conditioned(g, 2200 + t).second;
    const auto support = support_of(sigma.sigma, default_support_threshold(sigma.sigma));
    CHECK(maxclasses_from_support(support).classes == maximal_classes(g));
  }
}
