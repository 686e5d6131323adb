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

#include <cstdint>
#include <utility>
#include <vector>

#include "hetrofair/rng.hpp"
#include "hetrofair/split.hpp"

namespace hetrofair {

struct BPRTriple {
  int user;
  int pos;  // in the user's train set
  int neg;  // outside the user's train set
};

// Walks all train edges once per epoch in shuffled order and pairs each
// (user, positive) with a negative item drawn uniformly with replacement,
// rejecting the user's train items by resampling.
class BatchSampler {
 public:
  BatchSampler(const DatasetSplit& split, std::uint64_t seed) : split_(&split), rng_(seed) {
    const int num_items = split.num_items();
    for (int u = 0; u < split.num_users(); ++u) {
      const auto& train = split.train_items[u];
      if (!train.empty() && static_cast<int>(train.size()) == num_items) {
        throw DataError("sampler: user '" + split.train_graph.user_ids[u] +
                        "' interacted with every item; no negative sample exists");
      }
      for (int i : train) {
        edges_.emplace_back(u, i);
      }
    }
    if (edges_.empty()) {
      throw DataError("sampler: no train interactions to sample from");
    }
  }

  int num_train_edges() const { return static_cast<int>(edges_.size()); }

  int batches_per_epoch(int batch_size) const {
    return (num_train_edges() + batch_size - 1) / batch_size;
  }

  void start_epoch() {
    rng_.shuffle(edges_);
    cursor_ = 0;
  }

  bool epoch_done() const { return cursor_ >= edges_.size(); }

  // Up to batch_size triples; shorter at the end of the epoch.
  std::vector<BPRTriple> sample_batch(int batch_size) {
    const int num_items = split_->num_items();
    std::vector<BPRTriple> batch;
    batch.reserve(batch_size);
    while (static_cast<int>(batch.size()) < batch_size && cursor_ < edges_.size()) {
      const auto [u, pos] = edges_[cursor_++];
      int neg = static_cast<int>(rng_.below(num_items));
      while (split_->in_train(u, neg)) {
        neg = static_cast<int>(rng_.below(num_items));
      }
      batch.push_back({u, pos, neg});
    }
    return batch;
  }

 private:
  const DatasetSplit* split_;
  Rng rng_;
  std::vector<std::pair<int, int>> edges_;
  std::size_t cursor_ = 0;
};

}  // namespace hetrofair
