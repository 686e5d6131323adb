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
#include <vector>

#include "hetrofair/model.hpp"
#include "hetrofair/split.hpp"

namespace hetrofair {

// Which interactions count as relevant, and therefore which known items are
// withheld from the candidate pool. Ranking for the test target also
// excludes validation items.
enum class EvalTarget { kValidation, kTest };

// Full ranking of one user's candidate items, best first. Ties in score
// break toward the smaller item index. rank_of maps item -> 1-based rank, 0
// for excluded (non-candidate) items.
struct RankedList {
  int user = 0;
  std::vector<int> items;
  std::vector<int> rank_of;
};

inline RankedList rank_items(const Matrix& Z, const DatasetSplit& split, int user,
                             EvalTarget target) {
  const int num_users = split.num_users();
  const int num_items = split.num_items();
  RankedList rl;
  rl.user = user;
  rl.rank_of.assign(num_items, 0);
  rl.items.reserve(num_items);
  for (int i = 0; i < num_items; ++i) {
    if (split.in_train(user, i)) {
      continue;
    }
    if (target == EvalTarget::kTest && split.in_valid(user, i)) {
      continue;
    }
    rl.items.push_back(i);
  }
  Eigen::VectorXd scores =
      Z.bottomRows(num_items) * Z.row(user).transpose();  // one score per item
  std::sort(rl.items.begin(), rl.items.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) {
      return scores[a] > scores[b];
    }
    return a < b;
  });
  for (std::size_t pos = 0; pos < rl.items.size(); ++pos) {
    rl.rank_of[rl.items[pos]] = static_cast<int>(pos) + 1;
  }
  return rl;
}

}  // namespace hetrofair
