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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hetrofair/common.hpp"
#include "hetrofair/graph.hpp"
#include "hetrofair/init.hpp"
#include "hetrofair/threading.hpp"

namespace hetrofair {

// Propagation variants. kLightGcn is plain degree-normalized aggregation;
// kFairAttention divides each message by the scalar attention delta*sigmoid
// of the endpoint dot product; kHetroFair extends that weight to one
// trainable value per feature.
enum class Mode : std::uint8_t { kLightGcn = 0, kFairAttention = 1, kHetroFair = 2 };

inline Mode parse_mode(const std::string& name) {
  if (name == "lightgcn") return Mode::kLightGcn;
  if (name == "fair_attention") return Mode::kFairAttention;
  if (name == "hetrofair") return Mode::kHetroFair;
  throw ValidationError("unknown mode '" + name +
                        "' (expected lightgcn, fair_attention or hetrofair)");
}

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::kLightGcn: return "lightgcn";
    case Mode::kFairAttention: return "fair_attention";
    case Mode::kHetroFair: return "hetrofair";
  }
  return "?";
}

// Attention divisors are floored here before the Hadamard division; sigmoid
// output can underflow for very negative logits.
inline constexpr double kDivisorFloor = 1e-8;

using SigmoidFn = double (*)(double);

struct ModelParams {
  Matrix X;                   // (num_users + num_items) x d initial embeddings
  std::vector<RowVector> W;   // K per-layer feature weights, 1 x d each
  double delta = 1.0;
  int K = 0;
  int d = 0;
  Mode mode = Mode::kLightGcn;
  double norm_exponent = 0.5;

  // W is allocated in every mode (lightgcn and fair_attention ignore it) so
  // checkpoints stay stable across mode switches.
  static ModelParams create(const InteractionGraph& graph, int K, int d, double delta, Mode mode,
                            InitScheme x_init, InitScheme w_init, std::uint64_t x_seed,
                            std::uint64_t w_seed, double norm_exponent = 0.5) {
    if (K < 1) throw ValidationError("model: K must be >= 1");
    if (d < 1) throw ValidationError("model: d must be >= 1");
    if (delta <= 0.0) throw ValidationError("model: delta must be > 0");
    ModelParams p;
    p.K = K;
    p.d = d;
    p.delta = delta;
    p.mode = mode;
    p.norm_exponent = norm_exponent;
    p.X = alt_init(graph.num_nodes(), d, x_init, x_seed);
    p.W.reserve(K);
    for (int k = 0; k < K; ++k) {
      // Distinct stream per layer, derived from the weight seed.
      std::uint64_t state = w_seed;
      for (int j = 0; j <= k; ++j) splitmix64_next(state);
      p.W.push_back(alt_init(1, d, w_init, state).row(0));
    }
    return p;
  }

  void check_consistent(const InteractionGraph& graph) const {
    if (X.rows() != graph.num_nodes() || X.cols() != d) {
      throw ValidationError("model: X shape " + std::to_string(X.rows()) + "x" +
                            std::to_string(X.cols()) + " does not match graph with " +
                            std::to_string(graph.num_nodes()) + " nodes and d=" +
                            std::to_string(d));
    }
    if (static_cast<int>(W.size()) != K) {
      throw ValidationError("model: expected K=" + std::to_string(K) + " weight vectors, have " +
                            std::to_string(W.size()));
    }
    for (const auto& w : W) {
      if (w.size() != d) throw ValidationError("model: weight vector width != d");
    }
    if (delta <= 0.0) throw ValidationError("model: delta must be > 0");
  }
};

// Canonical undirected edge enumeration (user-major, neighbors ascending)
// with the degree-normalization coefficient 1 / (d_u^e * d_i^e) precomputed
// per edge. All propagation and backprop loops share this ordering, which is
// what makes reductions deterministic.
struct EdgeSet {
  int num_users = 0;
  int num_items = 0;
  int num_edges = 0;
  std::vector<int> user;             // per edge
  std::vector<int> item;             // per edge
  std::vector<double> coeff;         // per edge
  std::vector<int> user_edge_begin;  // size num_users + 1; user u owns [begin[u], begin[u+1])
  std::vector<std::vector<int>> item_edge_ids;  // per item, user-ascending
};

inline EdgeSet make_edge_set(const InteractionGraph& graph, double norm_exponent) {
  for (int u = 0; u < graph.num_users; ++u) {
    if (graph.user_degree[u] == 0) {
      throw DataError("propagation: zero-degree user '" +
                      (u < static_cast<int>(graph.user_ids.size()) ? graph.user_ids[u]
                                                                   : std::to_string(u)) +
                      "' in graph");
    }
  }
  for (int i = 0; i < graph.num_items; ++i) {
    if (graph.item_degree[i] == 0) {
      throw DataError("propagation: zero-degree item '" +
                      (i < static_cast<int>(graph.item_ids.size()) ? graph.item_ids[i]
                                                                   : std::to_string(i)) +
                      "' in graph");
    }
  }
  EdgeSet es;
  es.num_users = graph.num_users;
  es.num_items = graph.num_items;
  es.num_edges = static_cast<int>(graph.num_edges());
  es.user.reserve(es.num_edges);
  es.item.reserve(es.num_edges);
  es.coeff.reserve(es.num_edges);
  es.user_edge_begin.resize(graph.num_users + 1, 0);
  es.item_edge_ids.resize(graph.num_items);

  std::vector<double> user_scale(graph.num_users);
  std::vector<double> item_scale(graph.num_items);
  for (int u = 0; u < graph.num_users; ++u) {
    user_scale[u] = std::pow(static_cast<double>(graph.user_degree[u]), -norm_exponent);
  }
  for (int i = 0; i < graph.num_items; ++i) {
    item_scale[i] = std::pow(static_cast<double>(graph.item_degree[i]), -norm_exponent);
  }
  int e = 0;
  for (int u = 0; u < graph.num_users; ++u) {
    es.user_edge_begin[u] = e;
    for (int i : graph.user_adj[u]) {
      es.user.push_back(u);
      es.item.push_back(i);
      es.coeff.push_back(user_scale[u] * item_scale[i]);
      es.item_edge_ids[i].push_back(e);
      ++e;
    }
  }
  es.user_edge_begin[graph.num_users] = e;
  return es;
}

// Attention weight for one edge. In hetrofair mode the endpoint dot product
// scales the layer's weight vector and the sigmoid applies per feature; in
// fair_attention mode the scalar delta*sigmoid(dot) is replicated across all
// d entries. Every entry lies in (0, delta).
inline RowVector edge_attention(const RowVector& h_u, const RowVector& h_i, const RowVector& W_k,
                                double delta, Mode mode, SigmoidFn sig = nullptr) {
  const SigmoidFn s = sig ? sig : &sigmoid;
  const double dot = h_u.dot(h_i);
  const int d = static_cast<int>(h_u.size());
  RowVector w(d);
  if (mode == Mode::kHetroFair) {
    for (int f = 0; f < d; ++f) {
      w[f] = delta * s(dot * W_k[f]);
    }
  } else if (mode == Mode::kFairAttention) {
    w.setConstant(delta * s(dot));
  } else {
    throw ValidationError("edge_attention: lightgcn mode has no attention weights");
  }
  return w;
}

namespace detail {

// Phase 1: per-edge attention rows (disjoint writes, parallel over edges).
// The scalar fair_attention weight is evaluated as the feature-weighted form
// with an implicit all-ones weight vector: same expression, same rounding,
// so pinning W^(k) to ones makes the two modes bit-identical.
inline void compute_edge_weights(const EdgeSet& es, const Matrix& H_prev, const RowVector* W_k,
                                 double delta, Mode mode, SigmoidFn sig, Matrix& weights,
                                 std::vector<double>& dots, int threads) {
  const int d = static_cast<int>(H_prev.cols());
  const RowVector ones = RowVector::Ones(d);
  const RowVector& wk = mode == Mode::kHetroFair ? *W_k : ones;
  parallel_for(es.num_edges, threads, [&](int begin, int end) {
    for (int e = begin; e < end; ++e) {
      const double dot = H_prev.row(es.user[e]).dot(H_prev.row(es.num_users + es.item[e]));
      dots[e] = dot;
      if (sig != nullptr) {
        for (int f = 0; f < d; ++f) {
          weights(e, f) = delta * sig(dot * wk[f]);
        }
      } else {
        // delta * sigmoid(dot * wk), vectorized; exp(-z) saturates safely at
        // the extremes (w -> 0 or delta).
        weights.row(e).array() = delta / (1.0 + (-dot * wk.array()).exp());
      }
    }
  });
}

// In-place aggregation halves of the propagation steps (outputs are fully
// overwritten; reusing a right-sized destination avoids reallocating the
// large per-edge tensors on every training batch).
inline void baseline_aggregate(const EdgeSet& es, const Matrix& H_prev, Matrix& H_next,
                               int threads) {
  H_next.setZero();
  parallel_for(es.num_users, threads, [&](int begin, int end) {
    for (int u = begin; u < end; ++u) {
      for (int e = es.user_edge_begin[u]; e < es.user_edge_begin[u + 1]; ++e) {
        H_next.row(u) += es.coeff[e] * H_prev.row(es.num_users + es.item[e]);
      }
    }
  });
  parallel_for(es.num_items, threads, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      for (int e : es.item_edge_ids[i]) {
        H_next.row(es.num_users + i) += es.coeff[e] * H_prev.row(es.user[e]);
      }
    }
  });
}

inline void fair_aggregate(const EdgeSet& es, const Matrix& H_prev, const Matrix& weights,
                           Matrix& H_next, int threads) {
  H_next.setZero();
  parallel_for(es.num_users, threads, [&](int begin, int end) {
    for (int u = begin; u < end; ++u) {
      for (int e = es.user_edge_begin[u]; e < es.user_edge_begin[u + 1]; ++e) {
        H_next.row(u).array() += es.coeff[e] * H_prev.row(es.num_users + es.item[e]).array() /
                                 weights.row(e).array().max(kDivisorFloor);
      }
    }
  });
  parallel_for(es.num_items, threads, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      for (int e : es.item_edge_ids[i]) {
        H_next.row(es.num_users + i).array() +=
            es.coeff[e] * H_prev.row(es.user[e]).array() /
            weights.row(e).array().max(kDivisorFloor);
      }
    }
  });
}

}  // namespace detail

// One step of plain degree-normalized propagation:
//   h_u' = sum_{i in N(u)} h_i / (d_u^e * d_i^e), and symmetrically for
// items, with e = norm_exponent (0.5 gives the symmetric square root term).
// No self-loops.
inline Matrix propagate_baseline(const EdgeSet& es, const Matrix& H_prev, int threads = 1) {
  Matrix H_next(H_prev.rows(), H_prev.cols());
  detail::baseline_aggregate(es, H_prev, H_next, threads);
  return H_next;
}

inline Matrix propagate_baseline(const InteractionGraph& graph, const Matrix& H_prev,
                                 double norm_exponent = 0.5) {
  if (H_prev.rows() != graph.num_nodes()) {
    throw ValidationError("propagate_baseline: embedding row count does not match graph");
  }
  return propagate_baseline(make_edge_set(graph, norm_exponent), H_prev);
}

struct FairStep {
  Matrix H_next;
  Matrix edge_weights;            // raw attention rows, one per edge
  std::vector<double> edge_dots;  // endpoint dot products, one per edge
};

// One step of attention-weighted propagation: each message is divided
// elementwise by the edge's attention row (floored at kDivisorFloor). The
// weight is computed once per undirected edge and reused in both directions.
inline FairStep propagate_fair(const EdgeSet& es, const Matrix& H_prev, const RowVector* W_k,
                               double delta, Mode mode, SigmoidFn sig = nullptr, int threads = 1) {
  FairStep step;
  step.edge_weights.resize(es.num_edges, H_prev.cols());
  step.edge_dots.resize(es.num_edges);
  detail::compute_edge_weights(es, H_prev, W_k, delta, mode, sig, step.edge_weights,
                               step.edge_dots, threads);
  step.H_next.resize(H_prev.rows(), H_prev.cols());
  detail::fair_aggregate(es, H_prev, step.edge_weights, step.H_next, threads);
  return step;
}

inline FairStep propagate_fair(const InteractionGraph& graph, const Matrix& H_prev,
                               const RowVector& W_k, double delta, Mode mode,
                               double norm_exponent = 0.5, SigmoidFn sig = nullptr) {
  if (H_prev.rows() != graph.num_nodes()) {
    throw ValidationError("propagate_fair: embedding row count does not match graph");
  }
  return propagate_fair(make_edge_set(graph, norm_exponent), H_prev, &W_k, delta, mode, sig);
}

// Everything the backward pass needs from the forward pass: all layer
// embeddings, plus (in attention modes) the per-layer edge weights and
// endpoint dot products.
struct EmbeddingLayers {
  std::vector<Matrix> H;                       // K + 1 matrices
  std::vector<Matrix> edge_weights;            // K matrices, |E| x d (attention modes)
  std::vector<std::vector<double>> edge_dots;  // K vectors, |E| (attention modes)
};

struct GenerationResult {
  Matrix Z;
  EmbeddingLayers layers;
};

// Runs K propagation layers from X and combines them uniformly:
//   Z = (1 / (K + 1)) * sum_{k=0..K} H^(k).
// With retain_for_backward=false the per-edge tensors are skipped
// (forward-only use such as evaluation). `result` may be reused across
// calls; matrices are resized only when shapes change.
inline void fair_embedding_generation_into(const EdgeSet& es, const ModelParams& params,
                                           bool retain_for_backward, int threads,
                                           GenerationResult& result) {
  auto& layers = result.layers;
  layers.H.resize(params.K + 1);
  const bool fair = params.mode != Mode::kLightGcn;
  const int retained = fair && retain_for_backward ? params.K : 0;
  layers.edge_weights.resize(retained);
  layers.edge_dots.resize(retained);
  Matrix scratch_weights;  // used when weights are not retained

  layers.H[0] = params.X;
  result.Z = params.X;
  for (int k = 1; k <= params.K; ++k) {
    layers.H[k].resize(params.X.rows(), params.d);
    if (!fair) {
      detail::baseline_aggregate(es, layers.H[k - 1], layers.H[k], threads);
    } else {
      Matrix& weights = retained > 0 ? layers.edge_weights[k - 1] : scratch_weights;
      weights.resize(es.num_edges, params.d);
      std::vector<double> local_dots;
      std::vector<double>& dots = retained > 0 ? layers.edge_dots[k - 1] : local_dots;
      dots.resize(es.num_edges);
      detail::compute_edge_weights(es, layers.H[k - 1], &params.W[k - 1], params.delta,
                                   params.mode, nullptr, weights, dots, threads);
      detail::fair_aggregate(es, layers.H[k - 1], weights, layers.H[k], threads);
    }
    result.Z += layers.H[k];
  }
  result.Z /= static_cast<double>(params.K + 1);
}

inline GenerationResult fair_embedding_generation(const EdgeSet& es, const ModelParams& params,
                                                  bool retain_for_backward = true,
                                                  int threads = 1) {
  GenerationResult result;
  fair_embedding_generation_into(es, params, retain_for_backward, threads, result);
  return result;
}

inline GenerationResult fair_embedding_generation(const InteractionGraph& graph,
                                                  const ModelParams& params,
                                                  bool retain_for_backward = true,
                                                  int threads = 1) {
  params.check_consistent(graph);
  return fair_embedding_generation(make_edge_set(graph, params.norm_exponent), params,
                                   retain_for_backward, threads);
}

// Interest scores for one user over the given items: Z[u] . Z[num_users + i].
inline std::vector<double> score(const Matrix& Z, int num_users, int user,
                                 const std::vector<int>& items) {
  const int num_items = static_cast<int>(Z.rows()) - num_users;
  if (user < 0 || user >= num_users) {
    throw ValidationError("score: user index out of range");
  }
  std::vector<double> out;
  out.reserve(items.size());
  for (int i : items) {
    if (i < 0 || i >= num_items) {
      throw ValidationError("score: item index out of range");
    }
    out.push_back(Z.row(user).dot(Z.row(num_users + i)));
  }
  return out;
}

}  // namespace hetrofair
