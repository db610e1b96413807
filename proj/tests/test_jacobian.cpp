#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "varid/fixtures.hpp"
#include "varid/jacobian.hpp"
#include "varid/selfcheck.hpp"

using namespace varid;

namespace {

std::pair<VarParameters, StationaryCovariance> conditioned_draw(const DirectedGraph& g,
                                                                std::uint64_t seed) {
  return selfcheck::detail::draw_well_conditioned(g, seed);
}

Matrix random_matrix(int n, Rng& rng) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

Vector vec_of(const Matrix& m) {
  // Row-major flattening, matching the sigma_ab column order (a-1)*n + b.
  const int n = static_cast<int>(m.rows());
  Vector v(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) v(a * n + b) = m(a, b);
  return v;
}

}  // namespace

TEST_CASE("commutation matrix basics") {
  CHECK(commutation_matrix(1)(0, 0) == 1.0);

  // n = 2: swaps the two middle coordinates.
  Matrix expect(4, 4);
  expect << 1, 0, 0, 0,
            0, 0, 1, 0,
            0, 1, 0, 0,
            0, 0, 0, 1;
  CHECK(max_abs(commutation_matrix(2) - expect) == 0.0);
  CHECK_THROWS_AS(commutation_matrix(0), InputError);
}

TEST_CASE("commutation matrix transposes vectorized matrices") {
  Rng rng(3);
  for (int n = 2; n <= 6; ++n) {
    const Matrix p = commutation_matrix(n);
    for (int t = 0; t < 50; ++t) {
      const Matrix x = random_matrix(n, rng);
      CHECK(max_abs(Matrix(p * vec_of(x) - vec_of(x.transpose()))) == 0.0);
    }
  }
}

TEST_CASE("commutation matrix acts blockwise as displayed") {
  // (M (x) I_3) P places row r of M spread across block row r, one copy per
  // block column: entry [(r-1)*3+s, (s-1)*3+c] = M(r, c).
  Rng rng(5);
  const Matrix m = random_matrix(3, rng);
  const Matrix lhs = kron(m, Matrix::Identity(3, 3)) * commutation_matrix(3);
  Matrix expect = Matrix::Zero(9, 9);
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s)
      for (int c = 0; c < 3; ++c) expect(r * 3 + s, s * 3 + c) = m(r, c);
  CHECK(max_abs(lhs - expect) < 1e-15);
}

TEST_CASE("building block B: diagonal indicator row and zero top block") {
  const DirectedGraph g(3, {});
  const VarParameters p{g, Matrix::Zero(3, 3), 1.0};
  const auto sigma = solve_stationary(p);
  const Matrix b = build_B(p, sigma);
  REQUIRE(b.rows() == 10);
  REQUIRE(b.cols() == 9);
  Vector bottom(9);
  bottom << 1, 0, 0, 0, 1, 0, 0, 0, 1;
  CHECK(max_abs(Matrix(b.row(9).transpose() - bottom)) == 0.0);
  CHECK(max_abs(b.topRows(9)) == 0.0);  // SL = 0 when lambda = 0
}

TEST_CASE("projected building block matches the worked three-node example") {
  const auto g = fixtures::worked_jacobian_graph();
  const auto [p, sigma] = conditioned_draw(g, 77);
  const Matrix sl = sigma.sigma * p.lambda;
  const Matrix got = project_psi(g, build_B(p, sigma));

  REQUIRE(jacobian_row_edges(g) ==
          std::vector<Edge>{{1, 1}, {1, 3}, {2, 1}, {2, 2}, {3, 3}});

  // Rows lambda_11, lambda_13, lambda_21, lambda_22, lambda_33, omega;
  // columns sigma_ab ordered (1,1),(1,2),...,(3,3).
  auto SL = [&](int a, int b) { return sl(a - 1, b - 1); };
  Matrix expect(6, 9);
  expect << 2 * SL(1, 1), SL(1, 2), SL(1, 3), SL(1, 2), 0, 0, SL(1, 3), 0, 0,
      0, 0, SL(1, 1), 0, 0, SL(1, 2), SL(1, 1), SL(1, 2), 2 * SL(1, 3),
      2 * SL(2, 1), SL(2, 2), SL(2, 3), SL(2, 2), 0, 0, SL(2, 3), 0, 0,
      0, SL(2, 1), 0, SL(2, 1), 2 * SL(2, 2), SL(2, 3), 0, SL(2, 3), 0,
      0, 0, SL(3, 1), 0, 0, SL(3, 2), SL(3, 1), SL(3, 2), 2 * SL(3, 3),
      1, 0, 0, 0, 1, 0, 0, 0, 1;
  CHECK(max_abs(got - expect) < 1e-12);
}

TEST_CASE("projection keeps the right rows") {
  const DirectedGraph complete(3, {{1, 2}, {1, 3}, {2, 1}, {2, 3}, {3, 1}, {3, 2}});
  const auto [pc, sc] = conditioned_draw(complete, 11);
  const Matrix b = build_B(pc, sc);
  CHECK(max_abs(project_psi(complete, b) - b) == 0.0);

  const DirectedGraph diag2(2, {});
  const auto [p2, s2] = conditioned_draw(diag2, 12);
  const Matrix pb = project_psi(diag2, build_B(p2, s2));
  CHECK(pb.rows() == 3);  // lambda_11, lambda_22, omega
  CHECK(pb.cols() == 4);
}

TEST_CASE("one-node Jacobian in closed form") {
  const DirectedGraph g(1, {});
  Matrix lam(1, 1);
  lam << 0.6;
  const VarParameters p{g, lam, 1.3};
  const auto bundle = extended_jacobian(p);
  REQUIRE(bundle.reduced.rows() == 2);
  REQUIRE(bundle.reduced.cols() == 1);
  const double l = 0.6, w = 1.3, d = 1.0 - l * l;
  CHECK(bundle.reduced(0, 0) == Catch::Approx(2 * l * w / (d * d)));
  CHECK(bundle.reduced(1, 0) == Catch::Approx(1.0 / d));
}

TEST_CASE("extended Jacobian columns are symmetric in (a,b)") {
  Rng rng(71);
  for (int t = 0; t < 10; ++t) {
    const int n = 2 + t % 4;
    const auto g = oracles::random_digraph(n, rng);
    const auto bundle = extended_jacobian(conditioned_draw(g, 300 + t).first);
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b) {
        const Matrix diff = bundle.extended.col((a - 1) * n + b - 1) -
                            bundle.extended.col((b - 1) * n + a - 1);
        CHECK(max_abs(diff) <= 1e-10 * std::max(1.0, max_abs(bundle.extended)));
      }
  }
}

TEST_CASE("extended Jacobian matches finite differences") {
  Rng rng(83);
  for (int t = 0; t < 8; ++t) {
    const int n = 1 + t % 5;
    const auto g = oracles::random_digraph(n, rng);
    const auto p = conditioned_draw(g, 400 + t).first;
    const auto bundle = extended_jacobian(p);
    const Matrix fd = selfcheck::detail::finite_difference_jacobian(p);
    for (Eigen::Index i = 0; i < fd.rows(); ++i)
      for (Eigen::Index j = 0; j < fd.cols(); ++j) {
        const double a = bundle.extended(i, j), b = fd(i, j);
        REQUIRE(std::abs(a - b) <= std::max(1e-6, 1e-5 * std::max(std::abs(a), std::abs(b))));
      }
  }
}

TEST_CASE("reduced Jacobian rank equals the building-block rank") {
  Rng rng(97);
  for (int t = 0; t < 15; ++t) {
    const int n = 2 + t % 4;
    const auto g = oracles::random_digraph(n, rng);
    const auto [p, sigma] = conditioned_draw(g, 500 + t);
    const auto bundle = extended_jacobian(p);
    const Matrix psi_b = project_psi(g, build_B(p, sigma));
    CHECK(numerical_rank(bundle.reduced).rank == numerical_rank(psi_b).rank);
  }
}

TEST_CASE("zero columns are exactly the non-comember pairs") {
  Rng rng(101);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 4;
    const auto g = oracles::random_digraph(n, rng);
    const auto bundle = extended_jacobian(conditioned_draw(g, 600 + t).first);
    const auto mc = maximal_classes(g);
    const double cutoff = 1e-9 * max_abs(bundle.reduced);
    for (std::size_t c = 0; c < bundle.reduced_cols.size(); ++c) {
      const auto& [a, b] = bundle.reduced_cols[c];
      const bool zero_col =
          bundle.reduced.col(static_cast<Eigen::Index>(c)).cwiseAbs().maxCoeff() <= cutoff;
      REQUIRE(zero_col == !comembership(mc, a, b));
    }
  }
}

TEST_CASE("generic rank of the bundled graphs") {
  CHECK(generic_rank(fixtures::overlap_dimension_graph(), 5, 2).rank == 10);
  const auto fam = fixtures::identifiable_family();
  CHECK(generic_rank(fam[0], 5, 3).rank == 7);
  CHECK(generic_rank(fam[1], 5, 4).rank == 8);
  CHECK(generic_rank(fam[2], 5, 5).rank == 8);
  CHECK(generic_rank(DirectedGraph(3, {}), 5, 6).rank == 3);
  CHECK_THROWS_AS(generic_rank(DirectedGraph(2, {}), 0, 1), InputError);
}

TEST_CASE("model dimension with provenance") {
  const auto d = dimension(fixtures::overlap_dimension_graph());
  CHECK(d.value == 10);
  CHECK(d.provenance == DimProvenance::formula);

  CHECK(dimension(DirectedGraph(3, {})).value == 3);

  const auto multi = fixtures::crossed_class_pair().first;
  const auto dm = dimension(multi, 5, 9);
  CHECK(dm.provenance == DimProvenance::numeric);
  CHECK(dm.value >= multi.node_count());
  CHECK(dm.value <= std::min<long long>(multi.edge_count_with_loops() + 1,
                                        comembership_pair_count(multi)));
}

TEST_CASE("rank bounds hold and the formula applies without multi-edges") {
  Rng rng(113);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 4;
    const auto g = oracles::random_digraph(n, rng);
    const auto rank = generic_rank(g, 5, 700 + t).rank;
    const long long n_r = g.edge_count_with_loops() + 1;
    const long long n_c = comembership_pair_count(g);
    REQUIRE(rank >= n);
    REQUIRE(rank <= std::min(n_r, n_c));
    if (!has_multi_edge(g)) REQUIRE(rank == std::min(n_r, n_c));
  }
}

TEST_CASE("raw linear matroid on the demo matrix") {
  const Matrix a = fixtures::matroid_demo_matrix();
  CHECK(columns_independent(a, {}));
  CHECK(columns_independent(a, {0}));
  CHECK_FALSE(columns_independent(a, {0, 3}));  // col 4 = 2 * col 1
  CHECK(columns_independent(a, {0, 1, 2}));
  CHECK(columns_independent(a, {1, 2, 3}));
  CHECK_FALSE(columns_independent(a, {0, 1, 2, 3}));
  CHECK_THROWS_AS(columns_independent(a, {4}), InputError);
}

TEST_CASE("matroid independence queries on graphs") {
  const auto g = fixtures::two_source_network();
  CHECK(matroid_independent(g, {}, 3, 1));
  CHECK(matroid_independent(g, {{4, 6}}, 3, 1));        // comember pair: nonzero column
  CHECK_FALSE(matroid_independent(g, {{1, 5}}, 3, 1));  // zero column
  CHECK_THROWS_AS(matroid_independent(g, {{0, 2}}, 3, 1), InputError);
}

TEST_CASE("full-system certificate matches its printed form on the chain") {
  const DirectedGraph g(3, {{1, 2}, {2, 3}});
  const auto [p, sigma] = conditioned_draw(g, 900);
  const Matrix sl = sigma.sigma * p.lambda;
  auto SL = [&](int a, int b) { return sl(a - 1, b - 1); };

  const Matrix bg = build_B_G(g, p, sigma, {1, 3});
  REQUIRE(bg.rows() == 3);
  Matrix expect(3, 3);
  expect << SL(1, 1) * SL(2, 2) - SL(1, 2) * SL(2, 1),
      SL(1, 3) * SL(2, 2) - SL(1, 2) * SL(2, 3), 0,
      0, SL(2, 2) * SL(3, 3) - SL(2, 3) * SL(3, 2),
      SL(2, 1) * SL(3, 3) - SL(2, 3) * SL(3, 1),
      SL(1, 2) / SL(1, 1) + SL(2, 1) / SL(2, 2),
      SL(2, 3) / SL(2, 2) + SL(3, 2) / SL(3, 3),
      SL(1, 3) / SL(1, 1) + SL(3, 1) / SL(3, 3);
  CHECK(max_abs(bg - expect) < 1e-12);
}

TEST_CASE("full-rank certificate implies a full-row-rank Jacobian") {
  const DirectedGraph g(3, {{1, 2}, {2, 3}});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto [p, sigma] = conditioned_draw(g, 1000 + seed);
    const Matrix bg = build_B_G(g, p, sigma, {1, 3});
    REQUIRE(std::abs(bg.determinant()) > 1e-12);
    const auto bundle = extended_jacobian(p);
    CHECK(numerical_rank(bundle.reduced).rank == g.edge_count_with_loops() + 1);
  }
}

TEST_CASE("exhaustive certificate mode over all admissible pairs") {
  // The overlap graph has several non-adjacent comember pairs; at a generic
  // draw at least one certificate is full rank, matching the full-row-rank
  // Jacobian.
  const auto g = fixtures::overlap_dimension_graph();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto [p, sigma] = conditioned_draw(g, 1400 + seed);
    CHECK(any_full_rank_B_G(g, p, sigma));
  }
  const DirectedGraph two(2, {{1, 2}});
  const auto [p2, s2] = conditioned_draw(two, 1450);
  CHECK_THROWS_AS(any_full_rank_B_G(two, p2, s2), InputError);
}

TEST_CASE("full-system certificate rejects bad inputs") {
  const DirectedGraph g(3, {{1, 2}, {2, 3}});
  const auto [p, sigma] = conditioned_draw(g, 1100);
  CHECK_THROWS_AS(build_B_G(g, p, sigma, {1, 2}), InputError);  // adjacent
  CHECK_THROWS_AS(build_B_G(g, p, sigma, {1, 1}), InputError);  // degenerate
  const DirectedGraph multi(2, {{1, 2}, {2, 1}});
  const auto [pm, sm] = conditioned_draw(multi, 1101);
  CHECK_THROWS_AS(build_B_G(multi, pm, sm, {1, 2}), InputError);

  const DirectedGraph fans = fixtures::disjoint_fans();
  const auto [pf, sf] = conditioned_draw(fans, 1102);
  CHECK_THROWS_AS(build_B_G(fans, pf, sf, {1, 4}), InputError);  // not comembers
}

TEST_CASE("column-count certificate for graphs with no spare pair") {
  const DirectedGraph two(2, {{1, 2}});
  const auto [p, sigma] = conditioned_draw(two, 1200);
  const Matrix bgp = build_B_G_prime(two, p, sigma);
  REQUIRE(bgp.rows() == 1);
  CHECK(std::abs(bgp(0, 0)) > 1e-12);

  // Full rank certifies rank = comember pair count.
  const auto bundle = extended_jacobian(p);
  CHECK(numerical_rank(bundle.reduced).rank == comembership_pair_count(two));

  // A diagonal interaction matrix turns the certificate diagonal-nonzero.
  const VarParameters diag2{two, 0.5 * Matrix::Identity(2, 2), 1.0};
  const Matrix b2 = build_B_G_prime(two, diag2, solve_stationary(diag2));
  CHECK(std::abs(b2(0, 0)) > 1e-12);

  // A graph with a non-adjacent comember pair belongs to the other case.
  const DirectedGraph chain(3, {{1, 2}, {2, 3}});
  const auto [pc, sc] = conditioned_draw(chain, 1300);
  CHECK_THROWS_AS(build_B_G_prime(chain, pc, sc), InputError);
}
