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
#include <cmath>
#include <cstdint>
#include <vector>

#include "hetrofair/graph.hpp"
#include "hetrofair/rng.hpp"

namespace hetrofair {

struct SplitRatios {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;

  void validate() const {
    if (train < 0.0 || valid < 0.0 || test < 0.0 ||
        std::abs(train + valid + test - 1.0) > 1e-9) {
      throw ValidationError("split ratios must be nonnegative and sum to 1");
    }
    if (train <= 0.0) {
      throw ValidationError("train ratio must be positive");
    }
  }
};

// Per-user train/validation/test partition. The train graph keeps the full
// graph's index space (same num_users/num_items) so that item indices mean
// the same thing everywhere; items can therefore have zero train degree.
struct DatasetSplit {
  InteractionGraph train_graph;
  std::vector<std::vector<int>> train_items;  // == train_graph.user_adj
  std::vector<std::vector<int>> valid_items;  // sorted per user
  std::vector<std::vector<int>> test_items;   // sorted per user

  int num_users() const { return train_graph.num_users; }
  int num_items() const { return train_graph.num_items; }

  bool in_train(int user, int item) const {
    const auto& v = train_items[user];
    return std::binary_search(v.begin(), v.end(), item);
  }
  bool in_valid(int user, int item) const {
    const auto& v = valid_items[user];
    return std::binary_search(v.begin(), v.end(), item);
  }
};

// Uniform per-user random partition. Validation and test take
// floor(n * ratio) items each; train keeps the remainder. Same seed, same
// split.
inline DatasetSplit split_interactions(const InteractionGraph& full, const SplitRatios& ratios,
                                       std::uint64_t seed) {
  ratios.validate();
  Rng rng(seed);

  DatasetSplit split;
  split.train_items.resize(full.num_users);
  split.valid_items.resize(full.num_users);
  split.test_items.resize(full.num_users);

  std::vector<int> items;
  for (int u = 0; u < full.num_users; ++u) {
    items = full.user_adj[u];  // sorted: canonical order before shuffling
    const int n = static_cast<int>(items.size());
    const int n_valid = static_cast<int>(std::floor(n * ratios.valid));
    const int n_test = static_cast<int>(std::floor(n * ratios.test));
    const int n_train = n - n_valid - n_test;
    if (n_train <= 0) {
      throw DataError("split: user '" + full.user_ids[u] + "' would lose all train items");
    }
    rng.shuffle(items);
    auto& train = split.train_items[u];
    auto& valid = split.valid_items[u];
    auto& test = split.test_items[u];
    train.assign(items.begin(), items.begin() + n_train);
    valid.assign(items.begin() + n_train, items.begin() + n_train + n_valid);
    test.assign(items.begin() + n_train + n_valid, items.end());
    std::sort(train.begin(), train.end());
    std::sort(valid.begin(), valid.end());
    std::sort(test.begin(), test.end());
  }

  auto& tg = split.train_graph;
  tg.num_users = full.num_users;
  tg.num_items = full.num_items;
  tg.user_ids = full.user_ids;
  tg.item_ids = full.item_ids;
  tg.user_adj = split.train_items;
  tg.item_adj.assign(full.num_items, {});
  for (int u = 0; u < full.num_users; ++u) {
    for (int i : split.train_items[u]) {
      tg.item_adj[i].push_back(u);
    }
  }
  tg.user_degree.resize(tg.num_users);
  tg.item_degree.resize(tg.num_items);
  for (int u = 0; u < tg.num_users; ++u) {
    tg.user_degree[u] = static_cast<int>(tg.user_adj[u].size());
  }
  for (int i = 0; i < tg.num_items; ++i) {
    tg.item_degree[i] = static_cast<int>(tg.item_adj[i].size());
  }
  return split;
}

}  // namespace hetrofair
