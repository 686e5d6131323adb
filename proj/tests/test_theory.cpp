// Copyright 2026 The HetroFair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hetrofair/theory.hpp"
#include "support/oracles.hpp"

using namespace hetrofair;
using Catch::Approx;

TEST_CASE("limit matrix of the two-node graph is 0.5 everywhere") {
  const LoopedGraph g = LoopedGraph::from_edges(2, {{0, 1}});
  const Matrix limit = limit_matrix(g);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(limit(i, j) == Approx(std::sqrt(4.0) / 4.0).epsilon(1e-15));
      CHECK(limit(i, j) == 0.5);
    }
  }
  // eigen-decomposition gives the same rank-1 limit
  const Matrix spectral = oracle::limit_by_eigendecomposition(normalized_adjacency(g));
  CHECK((limit - spectral).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("limit matrix of the triangle is 1/3 everywhere") {
  const LoopedGraph g = LoopedGraph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  const Matrix limit = limit_matrix(g);
  CHECK(limit.minCoeff() == Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(limit.maxCoeff() == Approx(1.0 / 3.0).epsilon(1e-15));
  const Matrix spectral = oracle::limit_by_eigendecomposition(normalized_adjacency(g));
  CHECK((limit - spectral).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("limit matrix matches the eigen-decomposition oracle on random graphs") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const LoopedGraph g = random_connected_graph(5 + static_cast<int>(seed), 0.3, seed);
    const Matrix limit = limit_matrix(g);
    const Matrix spectral = oracle::limit_by_eigendecomposition(normalized_adjacency(g));
    CHECK((limit - spectral).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("limit matrix is rank-1 symmetric positive") {
  const LoopedGraph g = random_connected_graph(12, 0.25, 5);
  const Matrix limit = limit_matrix(g);
  CHECK((limit - limit.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(limit.minCoeff() > 0.0);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(limit);
  CHECK(svd.singularValues()[0] > 1e-8);
  CHECK(svd.singularValues()[1] < 1e-12);  // rank 1
}

TEST_CASE("limit matrix requires a connected graph") {
  LoopedGraph g;
  g.adj.resize(4);
  g.adj[0] = {1};
  g.adj[1] = {0};
  g.adj[2] = {3};
  g.adj[3] = {2};
  CHECK(!g.connected());
  CHECK_THROWS_AS(limit_matrix(g), DataError);
}

TEST_CASE("power_iterate at k=1 reproduces the two-node hand matrix") {
  const LoopedGraph g = LoopedGraph::from_edges(2, {{0, 1}});
  const Matrix m = power_iterate(g, 1);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(m(i, j) == Approx(0.5).epsilon(1e-15));  // degrees-with-loop are 2
    }
  }
}

TEST_CASE("powers stay symmetric") {
  const LoopedGraph g = random_connected_graph(9, 0.3, 2);
  for (int k : {1, 3, 7}) {
    const Matrix m = power_iterate(g, k);
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("power iteration converges to the closed form") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const LoopedGraph g = random_connected_graph(6 + static_cast<int>(seed % 15), 0.3, seed + 10);
    const ConvergenceTrace t = verify_theorem1(g, 200, 1e-6);
    INFO("seed=" << seed << " err=" << t.max_abs_error);
    CHECK(t.passed);
  }
}

TEST_CASE("two-node graph is already at its limit") {
  const LoopedGraph g = LoopedGraph::from_edges(2, {{0, 1}});
  const ConvergenceTrace t = verify_theorem1(g, 50, 1e-8);
  CHECK(t.passed);
  CHECK(t.max_abs_error < 1e-12);  // equal at k=1 already
}

TEST_CASE("a random tree converges by k=500") {
  // Trees are connected with no extra edges; mixing is slow but bounded.
  const LoopedGraph g = random_connected_graph(10, 0.0, 77);
  CHECK(g.num_edges() == 9);
  const ConvergenceTrace t = verify_theorem1(g, 500, 1e-6);
  CHECK(t.passed);
}

TEST_CASE("bipartite graphs without self-loops oscillate instead of converging") {
  const LoopedGraph g = random_connected_bipartite(5, 6, 0.3, 3, /*self_loops=*/false);
  const Matrix even = power_iterate(g, 200);
  const Matrix odd = power_iterate(g, 201);
  // Period-2 behavior: consecutive powers stay far apart, and neither matches
  // the closed form that assumes self-loops.
  CHECK((even - odd).cwiseAbs().maxCoeff() > 0.1);
  const Matrix limit = limit_matrix(g);
  CHECK((even - limit).cwiseAbs().maxCoeff() > 0.01);
  CHECK((odd - limit).cwiseAbs().maxCoeff() > 0.01);
}

TEST_CASE("convergence error is nonincreasing after the mixing point") {
  const LoopedGraph g = random_connected_graph(12, 0.3, 21);
  const Matrix limit = limit_matrix(g);
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 10; k <= 60; k += 5) {
    const double err = (power_iterate(g, k) - limit).cwiseAbs().maxCoeff();
    CHECK(err <= previous + 1e-12);
    previous = err;
  }
}

TEST_CASE("a hub item dominates both norm and score orderings") {
  // Star-like bipartite graph: item 0 is connected to all five users; the
  // other items have one user each.
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < 5; ++u) {
    edges.emplace_back(u, 5);  // hub item (node 5)
    edges.emplace_back(u, 6 + u);
  }
  const LoopedGraph g = LoopedGraph::from_edges(11, edges, true, 5);
  REQUIRE(g.connected());
  const PropositionReport report = verify_propositions(g, 100, 6, 9);
  // Hub degree 5, all other items degree 1: degree-distinct filtering keeps
  // nothing (five ties at 1)... the hub check is done directly instead.
  Rng rng(9);
  Matrix h0(11, 6);
  for (int r = 0; r < 11; ++r) {
    for (int c = 0; c < 6; ++c) {
      h0(r, c) = rng.uniform(0.1, 1.0);
    }
  }
  const Matrix m = normalized_adjacency(g);
  Matrix h = h0;
  for (int k = 0; k < 100; ++k) {
    h = m * h;
  }
  const double hub_norm = h.row(5).norm();
  for (int item = 6; item < 11; ++item) {
    CHECK(h.row(item).norm() < hub_norm);
  }
  for (int u = 0; u < 5; ++u) {
    const double hub_score = h.row(u).dot(h.row(5));
    for (int item = 6; item < 11; ++item) {
      CHECK(h.row(u).dot(h.row(item)) < hub_score);
    }
  }
  (void)report;
}

TEST_CASE("propositions hold on random self-looped bipartite graphs") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const LoopedGraph g = degree_diverse_bipartite(8 + static_cast<int>(seed % 6),
                                                   9 + static_cast<int>(seed % 8), seed + 50);
    const PropositionReport report = verify_propositions(g, 200, 8, seed + 1);
    INFO("seed=" << seed);
    CHECK(report.all_perfect);
  }
}

TEST_CASE("k=0 propositions reflect only the initial features") {
  // Without propagation nothing enforces degree-norm correlation, so across
  // seeds the perfect ordering must break somewhere.
  int imperfect = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const LoopedGraph g = random_connected_bipartite(10, 12, 0.3, seed + 4);
    const PropositionReport report = verify_propositions(g, 0, 8, seed + 2);
    REQUIRE(report.norm_src_users.has_value());
    imperfect += report.all_perfect ? 0 : 1;
  }
  CHECK(imperfect >= 4);
}

TEST_CASE("random battery graphs are connected and bipartite-sided") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LoopedGraph g = random_connected_graph(4 + static_cast<int>(seed % 17), 0.2, seed);
    CHECK(g.connected());
    const LoopedGraph b = random_connected_bipartite(3 + static_cast<int>(seed % 9),
                                                     4 + static_cast<int>(seed % 6), 0.2, seed);
    CHECK(b.connected());
    // no user-user or item-item edges
    for (int u = 0; u < b.num_users; ++u) {
      for (int v : b.adj[u]) {
        CHECK(v >= b.num_users);
      }
    }
  }
}
