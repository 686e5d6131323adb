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

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "hetrofair/common.hpp"
#include "hetrofair/metrics.hpp"
#include "hetrofair/rng.hpp"

namespace hetrofair {

// Small undirected graph for the dense-matrix verifiers. Self-loops are an
// augmentation flag rather than stored edges: degrees always count base
// edges only, and the iteration matrix becomes D~^{-1/2} A~ D~^{-1/2} with
// A~ = A + I, D~ = D + I when the flag is set.
struct LoopedGraph {
  std::vector<std::vector<int>> adj;
  bool self_loops = true;
  // When > 0, nodes [0, num_users) are users and the rest are items
  // (bipartite origin); proposition checks use this split.
  int num_users = 0;

  int num_nodes() const { return static_cast<int>(adj.size()); }

  int num_edges() const {
    int deg_sum = 0;
    for (const auto& neighbors : adj) {
      deg_sum += static_cast<int>(neighbors.size());
    }
    return deg_sum / 2;
  }

  int degree(int v) const { return static_cast<int>(adj[v].size()); }

  bool connected() const {
    const int n = num_nodes();
    if (n == 0) {
      return false;
    }
    std::vector<char> seen(n, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int count = 1;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int w : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          queue.push_back(w);
        }
      }
    }
    return count == n;
  }

  static LoopedGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                                bool self_loops = true, int num_users = 0) {
    LoopedGraph g;
    g.adj.resize(n);
    g.self_loops = self_loops;
    g.num_users = num_users;
    for (const auto& [a, b] : edges) {
      g.adj[a].push_back(b);
      g.adj[b].push_back(a);
    }
    return g;
  }
};

// Symmetric-normalized (optionally self-looped) adjacency.
inline Matrix normalized_adjacency(const LoopedGraph& g) {
  const int n = g.num_nodes();
  const double loop = g.self_loops ? 1.0 : 0.0;
  Eigen::VectorXd inv_sqrt(n);
  for (int v = 0; v < n; ++v) {
    const double deg = g.degree(v) + loop;
    if (deg <= 0.0) {
      throw DataError("theory: isolated node without self-loop");
    }
    inv_sqrt[v] = 1.0 / std::sqrt(deg);
  }
  Matrix m = Matrix::Zero(n, n);
  for (int v = 0; v < n; ++v) {
    for (int w : g.adj[v]) {
      m(v, w) = inv_sqrt[v] * inv_sqrt[w];
    }
    if (g.self_loops) {
      m(v, v) = inv_sqrt[v] * inv_sqrt[v];
    }
  }
  return m;
}

// Closed-form limit of the self-looped power iteration:
//   entry (i, j) = sqrt((d_i + 1)(d_j + 1)) / (2|E| + |V|),
// with |E| counting base (non-self-loop) edges. Rank-1 by construction.
inline Matrix limit_matrix(const LoopedGraph& g) {
  if (!g.connected()) {
    throw DataError("theory: limit matrix requires a connected graph");
  }
  const int n = g.num_nodes();
  const double denom = 2.0 * g.num_edges() + n;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double product =
          (static_cast<double>(g.degree(i)) + 1.0) * (static_cast<double>(g.degree(j)) + 1.0);
      m(i, j) = std::sqrt(product) / denom;
    }
  }
  return m;
}

// k-fold product of the normalized adjacency, by plain repeated
// multiplication in double precision.
inline Matrix power_iterate(const LoopedGraph& g, int k) {
  if (k < 1) {
    throw ValidationError("power_iterate: k must be >= 1");
  }
  const Matrix m = normalized_adjacency(g);
  Matrix acc = m;
  for (int i = 1; i < k; ++i) {
    acc = acc * m;
  }
  return acc;
}

struct ConvergenceTrace {
  int k = 0;
  double max_abs_error = 0.0;
  double tol = 0.0;
  bool passed = false;
  Matrix limit;
};

inline ConvergenceTrace verify_theorem1(const LoopedGraph& g, int k, double tol) {
  if (tol <= 0.0) {
    throw ValidationError("verify_theorem1: tol must be > 0");
  }
  ConvergenceTrace trace;
  trace.k = k;
  trace.tol = tol;
  trace.limit = limit_matrix(g);
  trace.max_abs_error = (power_iterate(g, k) - trace.limit).cwiseAbs().maxCoeff();
  trace.passed = trace.max_abs_error <= tol;
  return trace;
}

struct PropositionReport {
  // Degree vs. embedding-norm ordering, per node side (degree-tied nodes
  // excluded; nullopt when fewer than two distinct degrees remain).
  std::optional<double> norm_src_users;
  std::optional<double> norm_src_items;
  // Degree vs. score ordering, worst case over users.
  std::optional<double> min_score_src;
  // Score ordering vs. norm ordering (both over items), worst case over
  // users.
  std::optional<double> min_agreement_src;
  bool all_perfect = false;
};

namespace detail {

// Keeps only nodes whose degree is unique within the group; ordering claims
// are vacuous between degree-tied nodes.
inline std::vector<int> degree_distinct(const LoopedGraph& g, int begin, int end) {
  std::map<int, int> count;
  for (int v = begin; v < end; ++v) {
    ++count[g.degree(v)];
  }
  std::vector<int> keep;
  for (int v = begin; v < end; ++v) {
    if (count[g.degree(v)] == 1) {
      keep.push_back(v);
    }
  }
  return keep;
}

}  // namespace detail

// Propagates positive random features k times and checks the orderings the
// limit analysis predicts: embedding norms follow degrees on each node side,
// and for every user both the score ordering over items and its agreement
// with the item-norm ordering are perfect.
inline PropositionReport verify_propositions(const LoopedGraph& g, int k, int dim,
                                             std::uint64_t seed) {
  if (!g.connected()) {
    throw DataError("verify_propositions: graph must be connected");
  }
  const int n = g.num_nodes();
  Rng rng(seed);
  Matrix h0(n, dim);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < dim; ++c) {
      h0(r, c) = rng.uniform(0.1, 1.0);
    }
  }
  const Matrix m = normalized_adjacency(g);
  Matrix h = h0;
  for (int i = 0; i < k; ++i) {
    h = m * h;
  }

  const int user_end = g.num_users > 0 ? g.num_users : n;
  const std::vector<int> users = detail::degree_distinct(g, 0, user_end);
  const std::vector<int> items =
      g.num_users > 0 ? detail::degree_distinct(g, g.num_users, n) : users;

  PropositionReport report;
  auto side_src = [&](const std::vector<int>& nodes) -> std::optional<double> {
    std::vector<double> degrees, norms;
    for (int v : nodes) {
      degrees.push_back(static_cast<double>(g.degree(v)));
      norms.push_back(h.row(v).norm());
    }
    return spearman(degrees, norms);
  };
  report.norm_src_users = side_src(users);
  report.norm_src_items = g.num_users > 0 ? side_src(items) : report.norm_src_users;

  std::vector<double> item_degrees, item_norms;
  for (int v : items) {
    item_degrees.push_back(static_cast<double>(g.degree(v)));
    item_norms.push_back(h.row(v).norm());
  }
  for (int u = 0; u < user_end; ++u) {
    std::vector<double> scores;
    scores.reserve(items.size());
    for (int v : items) {
      scores.push_back(h.row(u).dot(h.row(v)));
    }
    const auto score_src = spearman(item_degrees, scores);
    const auto agree_src = spearman(item_norms, scores);
    if (score_src.has_value() &&
        (!report.min_score_src.has_value() || *score_src < *report.min_score_src)) {
      report.min_score_src = score_src;
    }
    if (agree_src.has_value() &&
        (!report.min_agreement_src.has_value() || *agree_src < *report.min_agreement_src)) {
      report.min_agreement_src = agree_src;
    }
  }

  const auto is_one = [](const std::optional<double>& v) {
    return v.has_value() && *v == 1.0;
  };
  report.all_perfect = is_one(report.norm_src_users) && is_one(report.norm_src_items) &&
                       is_one(report.min_score_src) && is_one(report.min_agreement_src);
  return report;
}

// Battery helpers: random connected structures used by the self-check
// command and the test suite.

inline LoopedGraph random_connected_graph(int n, double extra_edge_prob, std::uint64_t seed,
                                          bool self_loops = true) {
  Rng rng(seed);
  std::set<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) {
    const int parent = static_cast<int>(rng.below(v));  // random spanning tree
    edges.emplace(parent, v);
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (rng.uniform() < extra_edge_prob) {
        edges.emplace(a, b);
      }
    }
  }
  return LoopedGraph::from_edges(
      n, std::vector<std::pair<int, int>>(edges.begin(), edges.end()), self_loops);
}

// Random connected bipartite graph. Node ids: users [0, nu), items
// [nu, nu + ni). A spanning tree is grown by attaching each new node to a
// random already-placed node of the other side, then extra cross edges are
// sprinkled in.
inline LoopedGraph random_connected_bipartite(int nu, int ni, double extra_edge_prob,
                                              std::uint64_t seed, bool self_loops = true) {
  Rng rng(seed);
  std::set<std::pair<int, int>> edges;
  edges.emplace(0, nu);
  int placed_users = 1;
  int placed_items = 1;
  for (int t = 1; t < std::max(nu, ni); ++t) {
    if (t < nu) {
      edges.emplace(t, nu + static_cast<int>(rng.below(placed_items)));
      ++placed_users;
    }
    if (t < ni) {
      edges.emplace(static_cast<int>(rng.below(placed_users)), nu + t);
      ++placed_items;
    }
  }
  for (int u = 0; u < nu; ++u) {
    for (int i = 0; i < ni; ++i) {
      if (rng.uniform() < extra_edge_prob) {
        edges.emplace(u, nu + i);
      }
    }
  }
  return LoopedGraph::from_edges(
      nu + ni, std::vector<std::pair<int, int>>(edges.begin(), edges.end()), self_loops, nu);
}

// Connected bipartite graph whose extra-edge probability ramps with the node
// index on both sides, so degrees spread out. Re-rolls deterministically
// until each side keeps at least `min_distinct` nodes with a unique degree
// (ordering claims are checked on degree-distinct nodes only).
inline LoopedGraph degree_diverse_bipartite(int nu, int ni, std::uint64_t seed,
                                            int min_distinct = 3) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(seed + attempt * 1000003ULL);
    std::set<std::pair<int, int>> edges;
    for (int u = 0; u < nu; ++u) {
      edges.emplace(u, nu + static_cast<int>(rng.below(ni)));
    }
    for (int i = 0; i < ni; ++i) {
      edges.emplace(static_cast<int>(rng.below(nu)), nu + i);
    }
    for (int u = 0; u < nu; ++u) {
      for (int i = 0; i < ni; ++i) {
        const double p = 0.9 * ((u + 1.0) / nu) * ((i + 1.0) / ni);
        if (rng.uniform() < p) {
          edges.emplace(u, nu + i);
        }
      }
    }
    LoopedGraph g = LoopedGraph::from_edges(
        nu + ni, std::vector<std::pair<int, int>>(edges.begin(), edges.end()), true, nu);
    if (!g.connected()) {
      continue;
    }
    if (static_cast<int>(detail::degree_distinct(g, 0, nu).size()) >= min_distinct &&
        static_cast<int>(detail::degree_distinct(g, nu, nu + ni).size()) >= min_distinct) {
      return g;
    }
  }
}

}  // namespace hetrofair
