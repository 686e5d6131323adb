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
#include <vector>

#include "hetrofair/model.hpp"
#include "hetrofair/sampler.hpp"

namespace hetrofair {

struct GradientSet {
  Matrix dX;
  std::vector<RowVector> dW;

  static GradientSet zeros(const ModelParams& params) {
    GradientSet g;
    g.dX = Matrix::Zero(params.X.rows(), params.X.cols());
    g.dW.assign(params.K, RowVector::Zero(params.d));
    return g;
  }
};

namespace detail {

// -ln sigmoid(x), computed without overflow.
inline double softplus_neg(double x) {
  return x > 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

inline double param_squared_norm(const ModelParams& params) {
  double reg = params.X.squaredNorm();
  for (const auto& w : params.W) {
    reg += w.squaredNorm();
  }
  return reg;
}

// Pairwise ranking loss over Z plus its gradient d/dZ (accumulated in triple
// order).
inline double ranking_loss(const Matrix& Z, int num_users, const std::vector<BPRTriple>& triples,
                           Matrix* dZ) {
  double loss = 0.0;
  for (const auto& t : triples) {
    const auto zu = Z.row(t.user);
    const auto zi = Z.row(num_users + t.pos);
    const auto zj = Z.row(num_users + t.neg);
    const double x = zu.dot(zi) - zu.dot(zj);
    loss += softplus_neg(x);
    if (dZ != nullptr) {
      const double g = sigmoid(x) - 1.0;
      dZ->row(t.user) += g * (zi - zj);
      dZ->row(num_users + t.pos) += g * zu;
      dZ->row(num_users + t.neg) -= g * zu;
    }
  }
  return loss;
}

// Reusable buffers for the training hot loop; matrices are reallocated only
// when shapes change.
struct TrainWorkspace {
  GenerationResult gen;
  Matrix to_user, to_item, w_grad;
  Matrix dZ, grad, grad_prev;
};

// Reverse step through one attention-weighted propagation layer. `G` is the
// loss gradient w.r.t. this layer's output; contributions w.r.t. the previous
// layer accumulate into `G_prev` and w.r.t. the layer weight into `dW_k`.
//
// Per edge (u, i) with previous embeddings a = h_u, b = h_i, coefficient c
// and raw attention row w (divisor floored at kDivisorFloor, which also
// gates the gradient):
//   output_u += c * b / w  and  output_i += c * a / w
// so
//   d/db = c * G_u / w,  d/da = c * G_i / w,
//   d/dw = -c * (G_u .* b + G_i .* a) / w^2,
// then through w = delta * sigmoid(z):  dw/dz = w * (1 - w / delta), with
// z = s * W_k (hetrofair, per feature) or z = s (fair_attention), and
// finally through s = a . b.
inline void backward_fair_layer(const EdgeSet& es, const ModelParams& params, const Matrix& H_prev,
                                const Matrix& weights, const std::vector<double>& dots, int layer_k,
                                const Matrix& G, Matrix& G_prev, RowVector& dW_k, int threads,
                                TrainWorkspace& ws) {
  const int d = params.d;
  const int U = es.num_users;
  const bool hetro = params.mode == Mode::kHetroFair;
  const RowVector& W_k = params.W[layer_k - 1];

  // Per-edge staging keeps the final reductions in a fixed order regardless
  // of the thread count.
  Matrix& to_user = ws.to_user;
  Matrix& to_item = ws.to_item;
  Matrix& w_grad = ws.w_grad;
  to_user.resize(es.num_edges, d);
  to_item.resize(es.num_edges, d);
  if (hetro) {
    w_grad.resize(es.num_edges, d);
  }

  // The scalar mode evaluates the same expressions with an implicit all-ones
  // weight vector, keeping it the exact special case of the vector form.
  using RowArray = Eigen::Array<double, 1, Eigen::Dynamic>;
  const RowVector ones = RowVector::Ones(d);
  const RowVector& wk = hetro ? W_k : ones;
  parallel_for(es.num_edges, threads, [&](int begin, int end) {
    RowArray inv_w(d), gw(d), t(d);
    for (int e = begin; e < end; ++e) {
      const int u = es.user[e];
      const int iv = U + es.item[e];
      const double c = es.coeff[e];
      const auto a = H_prev.row(u).array();
      const auto b = H_prev.row(iv).array();
      const auto gu = G.row(u).array();
      const auto gi = G.row(iv).array();
      const auto w_raw = weights.row(e).array();

      inv_w = w_raw.max(kDivisorFloor).inverse();
      gw = -c * (gu * b + gi * a) * inv_w * inv_w;
      to_user.row(e).array() = c * gi * inv_w;
      to_item.row(e).array() = c * gu * inv_w;

      // through w = delta * sigmoid(z): dw/dz = delta * sig * (1 - sig) with
      // sig = w/delta, gated by the divisor floor
      t = (w_raw > kDivisorFloor)
              .select(gw * (w_raw / params.delta) * (1.0 - w_raw / params.delta) * params.delta,
                      0.0);
      const double ds = (t * wk.array()).sum();
      if (hetro) {
        w_grad.row(e).array() = t * dots[e];
      }
      // s = a . b feeds both endpoints
      to_user.row(e).array() += ds * b;
      to_item.row(e).array() += ds * a;
    }
  });

  parallel_for(es.num_users, threads, [&](int begin, int end) {
    for (int u = begin; u < end; ++u) {
      for (int e = es.user_edge_begin[u]; e < es.user_edge_begin[u + 1]; ++e) {
        G_prev.row(u) += to_user.row(e);
      }
    }
  });
  parallel_for(es.num_items, threads, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      for (int e : es.item_edge_ids[i]) {
        G_prev.row(U + i) += to_item.row(e);
      }
    }
  });
  if (hetro) {
    for (int e = 0; e < es.num_edges; ++e) {
      dW_k += w_grad.row(e);
    }
  }
}

}  // namespace detail

// Eq.-style BPR objective: sum over triples of -ln sigmoid(y_ui - y_uj) plus
// beta * ||Theta||^2, where Theta is X and all W^(k) and the scores come from
// the generated embeddings Z.
inline double bpr_loss(const ModelParams& params, const EdgeSet& es,
                       const std::vector<BPRTriple>& triples, double reg_beta, int threads = 1) {
  const GenerationResult gen = fair_embedding_generation(es, params, /*retain_for_backward=*/false,
                                                         threads);
  return detail::ranking_loss(gen.Z, es.num_users, triples, nullptr) +
         reg_beta * detail::param_squared_norm(params);
}

inline double bpr_loss(const ModelParams& params, const InteractionGraph& graph,
                       const std::vector<BPRTriple>& triples, double reg_beta) {
  params.check_consistent(graph);
  return bpr_loss(params, make_edge_set(graph, params.norm_exponent), triples, reg_beta);
}

// Exact gradient of bpr_loss w.r.t. X and every W^(k). The gradient flows
// through the attention weights (no stop-gradient anywhere). Accumulation
// order is fixed, so results are bit-identical across runs and thread counts.
inline GradientSet bpr_gradients(const ModelParams& params, const EdgeSet& es,
                                 const std::vector<BPRTriple>& triples, double reg_beta,
                                 int threads = 1, double* loss_out = nullptr,
                                 detail::TrainWorkspace* workspace = nullptr) {
  detail::TrainWorkspace local;
  detail::TrainWorkspace& ws = workspace != nullptr ? *workspace : local;
  fair_embedding_generation_into(es, params, /*retain_for_backward=*/true, threads, ws.gen);
  GradientSet grads = GradientSet::zeros(params);

  ws.dZ.resize(params.X.rows(), params.X.cols());
  ws.dZ.setZero();
  const double rank_loss = detail::ranking_loss(ws.gen.Z, es.num_users, triples, &ws.dZ);
  if (loss_out != nullptr) {
    *loss_out = rank_loss + reg_beta * detail::param_squared_norm(params);
  }

  // Z averages the K+1 layers, so each layer receives dZ / (K + 1) directly
  // in addition to what flows down from the layers above it.
  ws.dZ /= static_cast<double>(params.K + 1);
  ws.grad = ws.dZ;  // d loss / d H^(K)
  for (int k = params.K; k >= 1; --k) {
    ws.grad_prev = ws.dZ;
    if (params.mode == Mode::kLightGcn) {
      // The normalized adjacency is symmetric, so the reverse step is the
      // same propagation applied to G.
      ws.grad_prev += propagate_baseline(es, ws.grad, threads);
    } else {
      detail::backward_fair_layer(es, params, ws.gen.layers.H[k - 1],
                                  ws.gen.layers.edge_weights[k - 1],
                                  ws.gen.layers.edge_dots[k - 1], k, ws.grad, ws.grad_prev,
                                  grads.dW[k - 1], threads, ws);
    }
    std::swap(ws.grad, ws.grad_prev);
  }
  grads.dX = ws.grad + 2.0 * reg_beta * params.X;
  for (int k = 0; k < params.K; ++k) {
    grads.dW[k] += 2.0 * reg_beta * params.W[k];
  }
  return grads;
}

inline GradientSet bpr_gradients(const ModelParams& params, const InteractionGraph& graph,
                                 const std::vector<BPRTriple>& triples, double reg_beta) {
  params.check_consistent(graph);
  return bpr_gradients(params, make_edge_set(graph, params.norm_exponent), triples, reg_beta);
}

}  // namespace hetrofair
