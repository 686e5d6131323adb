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

#include "hetrofair/init.hpp"
#include "hetrofair/model.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

using namespace hetrofair;
using Catch::Approx;

namespace {

double frozen_half(double) { return 0.5; }

InteractionGraph single_edge_graph() {
  return build_graph({{"u", "i", "", std::nullopt}});
}

}  // namespace

TEST_CASE("xavier_init is deterministic and bounded") {
  const Matrix a = xavier_init(20, 10, 7);
  const Matrix b = xavier_init(20, 10, 7);
  const Matrix c = xavier_init(20, 10, 8);
  CHECK(a == b);
  CHECK(a != c);
  const double bound = std::sqrt(6.0 / 30.0);
  CHECK(a.cwiseAbs().maxCoeff() <= bound);
}

TEST_CASE("xavier_init sample mean is near zero") {
  const int rows = 1000, cols = 64;
  const Matrix m = xavier_init(rows, cols, 99);
  const double bound = std::sqrt(6.0 / (rows + cols));
  // uniform on [-b, b]: variance b^2/3, so SE of the mean is b/sqrt(3n)
  const double se = bound / std::sqrt(3.0 * rows * cols);
  CHECK(std::abs(m.mean()) < 3.0 * se);
}

TEST_CASE("alt_init zeros and normal behave as named") {
  CHECK(alt_init(5, 4, InitScheme::kZeros, 1).isZero());
  const Matrix a = alt_init(5, 4, InitScheme::kNormal, 3);
  const Matrix b = alt_init(5, 4, InitScheme::kNormal, 3);
  CHECK(a == b);

  const Matrix big = alt_init(1000, 100, InitScheme::kNormal, 5);
  const double mean = big.mean();
  const double stddev = std::sqrt((big.array() - mean).square().sum() / big.size());
  CHECK(std::abs(stddev - 0.01) < 0.002);  // within 20% of 0.01
}

TEST_CASE("propagate_baseline swaps embeddings across a single edge") {
  const auto g = single_edge_graph();
  Matrix h(2, 3);
  h << 1, 2, 3, 4, 5, 6;
  const Matrix next = propagate_baseline(g, h);
  CHECK(next.row(0) == h.row(1));
  CHECK(next.row(1) == h.row(0));
}

TEST_CASE("propagate_baseline maps zero to zero") {
  const auto g = build_graph(synth::random_interactions(6, 5, 12, 1));
  const Matrix zeros = Matrix::Zero(g.num_nodes(), 4);
  CHECK(propagate_baseline(g, zeros).isZero());
}

TEST_CASE("propagate_baseline matches the dense oracle on the 2x2 square") {
  std::vector<Interaction> square;
  for (int u = 0; u < 2; ++u) {
    for (int i = 0; i < 2; ++i) {
      square.push_back({synth::user_id(u), synth::item_id(i), "", std::nullopt});
    }
  }
  const auto g = build_graph(square);
  const Matrix h = Matrix::Ones(4, 2);
  const Matrix mine = propagate_baseline(g, h);
  const Matrix expected = oracle::dense_normalized_adjacency(g, 0.5) * h;
  CHECK((mine - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(mine(0, 0) == Approx(1.0));  // two neighbors, each contributing 1/2
}

TEST_CASE("propagate_baseline equals the dense formulation on random graphs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = build_graph(
        synth::random_interactions(4 + static_cast<int>(seed % 12), 3 + static_cast<int>(seed % 9),
                                   30, seed));
    const Matrix h = synth::random_embeddings(g.num_nodes(), 5, seed + 100);
    for (double exponent : {0.5, 0.75, 1.0}) {
      const Matrix mine = propagate_baseline(g, h, exponent);
      const Matrix expected = oracle::dense_normalized_adjacency(g, exponent) * h;
      CHECK((mine - expected).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("propagation raises on zero-degree nodes") {
  auto split = synth::manual_split(2, 2, {{0}, {0}}, {{}, {}}, {{1}, {1}});
  // item 1 has no train edge
  const Matrix h = Matrix::Ones(4, 2);
  CHECK_THROWS_AS(propagate_baseline(split.train_graph, h), DataError);
}

TEST_CASE("edge_attention returns delta/2 for zero logits") {
  RowVector hu(3), hi(3), w(3);
  hu << 1, 0, 2;
  hi << 0, 3, 0;  // dot = 0
  w << 0.5, -0.5, 1.0;
  const RowVector zero_w = RowVector::Zero(3);
  const double delta = 0.7;

  const RowVector hetro = edge_attention(hu, hi, zero_w, delta, Mode::kHetroFair);
  const RowVector fair = edge_attention(hu, hi, w, delta, Mode::kFairAttention);
  for (int f = 0; f < 3; ++f) {
    CHECK(hetro[f] == Approx(delta * 0.5));
    CHECK(fair[f] == Approx(delta * 0.5));
  }
}

TEST_CASE("edge_attention evaluates the two-feature hand example") {
  RowVector hu(2), hi(2), w(2);
  hu << 1, 1;
  hi << 1, 1;  // dot = 2
  w << 0.5, -0.5;
  const RowVector out = edge_attention(hu, hi, w, 1.0, Mode::kHetroFair);
  CHECK(out[0] == Approx(sigmoid(1.0)).epsilon(1e-12));
  CHECK(out[1] == Approx(sigmoid(-1.0)).epsilon(1e-12));
  CHECK(out[0] == Approx(0.7311).margin(5e-5));
  CHECK(out[1] == Approx(0.2689).margin(5e-5));
}

TEST_CASE("edge_attention entries always lie in (0, delta)") {
  // Inputs stay below sigmoid saturation (|logit| < 30) so the open bound is
  // representable in double precision.
  Rng rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(rng.below(6));
    RowVector hu(d), hi(d), w(d);
    for (int f = 0; f < d; ++f) {
      hu[f] = rng.uniform(-1, 1);
      hi[f] = rng.uniform(-1, 1);
      w[f] = rng.uniform(-2, 2);
    }
    const double delta = rng.uniform(0.05, 1.0);
    const Mode mode = trial % 2 == 0 ? Mode::kHetroFair : Mode::kFairAttention;
    const RowVector out = edge_attention(hu, hi, w, delta, mode);
    for (int f = 0; f < d; ++f) {
      CHECK(out[f] > 0.0);
      CHECK(out[f] < delta);
    }
  }
}

TEST_CASE("propagate_fair with delta=1 and W=0 doubles the baseline step") {
  const auto g = build_graph(synth::random_interactions(5, 6, 14, 2));
  const Matrix h = synth::random_embeddings(g.num_nodes(), 4, 9);
  const RowVector w0 = RowVector::Zero(4);
  const FairStep step = propagate_fair(g, h, w0, 1.0, Mode::kHetroFair);
  const Matrix baseline = propagate_baseline(g, h);
  CHECK((step.H_next - 2.0 * baseline).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("propagate_fair maps zero embeddings to zero") {
  const auto g = build_graph(synth::random_interactions(4, 4, 10, 3));
  const Matrix zeros = Matrix::Zero(g.num_nodes(), 3);
  RowVector w(3);
  w << 1, -2, 0.5;
  const FairStep step = propagate_fair(g, zeros, w, 0.8, Mode::kHetroFair);
  CHECK(step.H_next.isZero());
  // attention is still delta/2 per entry
  CHECK(step.edge_weights.minCoeff() == Approx(0.4));
  CHECK(step.edge_weights.maxCoeff() == Approx(0.4));
}

TEST_CASE("propagate_fair single-edge hand evaluation") {
  const auto g = single_edge_graph();
  Matrix h(2, 1);
  h << 1, 2;  // h_u = (1), h_i = (2), dot = 2
  RowVector w(1);
  w << 1;
  const FairStep step = propagate_fair(g, h, w, 1.0, Mode::kHetroFair);
  const double sig2 = sigmoid(2.0);
  CHECK(sig2 == Approx(0.8808).margin(5e-5));
  CHECK(step.edge_weights(0, 0) == Approx(sig2).epsilon(1e-12));
  CHECK(step.H_next(0, 0) == Approx(2.0 / sig2).epsilon(1e-12));
  CHECK(step.H_next(1, 0) == Approx(1.0 / sig2).epsilon(1e-12));
}

TEST_CASE("fair_attention with frozen sigmoid reproduces twice the baseline") {
  const auto g = build_graph(synth::random_interactions(6, 7, 20, 5));
  const Matrix h = synth::random_embeddings(g.num_nodes(), 3, 1);
  RowVector w(3);
  w << 0.3, -0.7, 2.0;
  const FairStep step = propagate_fair(g, h, w, 1.0, Mode::kFairAttention, 0.5, &frozen_half);
  const Matrix baseline = propagate_baseline(g, h);
  CHECK((step.H_next - 2.0 * baseline).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hetrofair with W=0 equals fair_attention under the frozen-sigmoid hook") {
  // sigma(s * 0) = sigma(0) = 1/2 exactly, so zero weights reduce the
  // feature-weighted form to a constant divisor; freezing the scalar form's
  // sigmoid at 1/2 is the matching special case.
  const auto g = build_graph(synth::random_interactions(5, 5, 15, 8));
  const Matrix h = synth::random_embeddings(g.num_nodes(), 4, 2);
  const RowVector w0 = RowVector::Zero(4);
  const double delta = 0.6;
  const FairStep hetro = propagate_fair(g, h, w0, delta, Mode::kHetroFair);
  const FairStep fair = propagate_fair(g, h, w0, delta, Mode::kFairAttention, 0.5, &frozen_half);
  CHECK(hetro.H_next == fair.H_next);
  CHECK(hetro.edge_weights == fair.edge_weights);
}

TEST_CASE("hetrofair with W frozen at ones equals fair_attention exactly") {
  // sigma(s * 1) = sigma(s) per feature: the vector form collapses to the
  // scalar form.
  const auto g = build_graph(synth::random_interactions(6, 6, 18, 11));
  const Matrix h = synth::random_embeddings(g.num_nodes(), 4, 3);
  const RowVector ones = RowVector::Ones(4);
  const double delta = 0.8;
  const FairStep hetro = propagate_fair(g, h, ones, delta, Mode::kHetroFair);
  const FairStep fair = propagate_fair(g, h, ones, delta, Mode::kFairAttention);
  CHECK(hetro.H_next == fair.H_next);
  CHECK(hetro.edge_weights == fair.edge_weights);
}

TEST_CASE("fair_embedding_generation averages layers on a single edge") {
  const auto g = single_edge_graph();
  ModelParams p;
  p.K = 1;
  p.d = 1;
  p.mode = Mode::kLightGcn;
  p.X = Matrix(2, 1);
  p.X << 1, 3;
  p.W.assign(1, RowVector::Zero(1));
  const GenerationResult gen = fair_embedding_generation(g, p);
  CHECK(gen.Z(0, 0) == Approx(2.0));  // (1 + 3) / 2
  CHECK(gen.Z(1, 0) == Approx(2.0));
  REQUIRE(gen.layers.H.size() == 2);
}

TEST_CASE("model construction rejects K=0") {
  const auto g = single_edge_graph();
  CHECK_THROWS_AS(ModelParams::create(g, 0, 4, 0.5, Mode::kLightGcn, InitScheme::kXavier,
                                      InitScheme::kXavier, 1, 2),
                  ValidationError);
}

TEST_CASE("lightgcn K=2 on the 4-node path matches the dense oracle") {
  // u0 - i0 - u1 - i1 as a bipartite path
  std::vector<Interaction> path;
  path.push_back({"u0", "i0", "", std::nullopt});
  path.push_back({"u1", "i0", "", std::nullopt});
  path.push_back({"u1", "i1", "", std::nullopt});
  const auto g = build_graph(path);
  ModelParams p;
  p.K = 2;
  p.d = 3;
  p.mode = Mode::kLightGcn;
  p.X = synth::random_embeddings(4, 3, 21);
  p.W.assign(2, RowVector::Zero(3));
  const GenerationResult gen = fair_embedding_generation(g, p);
  const Matrix expected = oracle::dense_layer_combination(g, p.X, 2, 0.5);
  CHECK((gen.Z - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("lightgcn layer combination equals the dense oracle on random graphs") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = build_graph(synth::random_interactions(8, 7, 25, seed + 40));
    ModelParams p;
    p.K = 3;
    p.d = 4;
    p.mode = Mode::kLightGcn;
    p.X = synth::random_embeddings(g.num_nodes(), 4, seed);
    p.W.assign(3, RowVector::Zero(4));
    const GenerationResult gen = fair_embedding_generation(g, p);
    const Matrix expected = oracle::dense_layer_combination(g, p.X, 3, 0.5);
    CHECK((gen.Z - expected).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("generation is deterministic and thread-count invariant") {
  const auto g = build_graph(synth::random_interactions(10, 9, 40, 6));
  ModelParams p = ModelParams::create(g, 3, 8, 0.6, Mode::kHetroFair, InitScheme::kXavier,
                                      InitScheme::kXavier, 5, 6);
  const GenerationResult a = fair_embedding_generation(g, p, true, 1);
  const GenerationResult b = fair_embedding_generation(g, p, true, 1);
  const GenerationResult c = fair_embedding_generation(g, p, true, 4);
  CHECK(a.Z == b.Z);
  CHECK(a.Z == c.Z);
  for (std::size_t k = 0; k < a.layers.edge_weights.size(); ++k) {
    CHECK(a.layers.edge_weights[k] == c.layers.edge_weights[k]);
  }
}

TEST_CASE("all stored attention entries lie in (0, delta)") {
  const auto g = build_graph(synth::random_interactions(7, 6, 22, 9));
  for (Mode mode : {Mode::kFairAttention, Mode::kHetroFair}) {
    ModelParams p = ModelParams::create(g, 2, 5, 0.35, mode, InitScheme::kXavier,
                                        InitScheme::kXavier, 3, 4);
    const GenerationResult gen = fair_embedding_generation(g, p);
    for (const auto& w : gen.layers.edge_weights) {
      CHECK(w.minCoeff() > 0.0);
      CHECK(w.maxCoeff() < p.delta);
    }
  }
}

TEST_CASE("a strictly dominant item accumulates the largest embedding norm") {
  // After two or more baseline layers from all-ones features, the max-degree
  // item outgrows every other item.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto interactions = synth::random_interactions(12, 8, 24, seed + 70);
    // make item 0 dominant: connect it to every user
    for (int u = 0; u < 12; ++u) {
      interactions.push_back({synth::user_id(u), synth::item_id(0), "", std::nullopt});
    }
    std::set<std::pair<std::string, std::string>> dedup;
    std::vector<Interaction> unique;
    for (const auto& it : interactions) {
      if (dedup.emplace(it.user, it.item).second) {
        unique.push_back(it);
      }
    }
    const auto g = build_graph(unique);
    const int hub = static_cast<int>(
        std::find(g.item_ids.begin(), g.item_ids.end(), "i0") - g.item_ids.begin());
    REQUIRE(g.item_degree[hub] == 12);
    bool strictly_dominant = true;
    for (int i = 0; i < g.num_items; ++i) {
      strictly_dominant =
          strictly_dominant && (i == hub || g.item_degree[i] < g.item_degree[hub]);
    }
    REQUIRE(strictly_dominant);

    ModelParams p;
    p.K = 2;
    p.d = 4;
    p.mode = Mode::kLightGcn;
    p.X = Matrix::Ones(g.num_nodes(), 4);
    p.W.assign(2, RowVector::Zero(4));
    const GenerationResult gen = fair_embedding_generation(g, p);
    const Matrix last = gen.layers.H.back();
    const double hub_norm = last.row(g.num_users + hub).norm();
    for (int i = 0; i < g.num_items; ++i) {
      if (i != hub) {
        CHECK(last.row(g.num_users + i).norm() < hub_norm);
      }
    }
  }
}

TEST_CASE("score computes dot products against the stacked layout") {
  Matrix z(3, 2);
  z << 1, 0,   // user 0
       0, 1,   // item 0
       1, 0;   // item 1
  CHECK(score(z, 1, 0, {0})[0] == 0.0);  // orthogonal
  CHECK(score(z, 1, 0, {1})[0] == 1.0);  // identical unit vectors

  const Matrix r = synth::random_embeddings(8, 4, 77);
  const auto scores = score(r, 3, 2, {0, 1, 2, 3, 4});
  for (int i = 0; i < 5; ++i) {
    double expected = 0.0;
    for (int f = 0; f < 4; ++f) {
      expected += r(2, f) * r(3 + i, f);
    }
    CHECK(scores[i] == Approx(expected).epsilon(1e-14));
  }
  CHECK_THROWS_AS(score(r, 3, 2, {5}), ValidationError);
  CHECK_THROWS_AS(score(r, 3, 3, {0}), ValidationError);
}
