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

#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "hetrofair/interactions.hpp"

namespace hetrofair {

// Iteratively removes users and items with fewer than k interactions until
// every remaining node has degree >= k. The fixpoint is unique, so the result
// does not depend on removal order. Input order is preserved.
inline std::vector<Interaction> k_core_filter(const std::vector<Interaction>& interactions, int k) {
  if (k < 1) {
    throw ValidationError("k_core_filter: k must be >= 1, got " + std::to_string(k));
  }
  std::unordered_map<std::string, int> user_deg;
  std::unordered_map<std::string, int> item_deg;
  for (const auto& it : interactions) {
    ++user_deg[it.user];
    ++item_deg[it.item];
  }

  // Peel with a worklist: when a node drops below k, remove all its edges and
  // decrement the counts of its neighbors.
  std::unordered_map<std::string, std::vector<const Interaction*>> by_user;
  std::unordered_map<std::string, std::vector<const Interaction*>> by_item;
  for (const auto& it : interactions) {
    by_user[it.user].push_back(&it);
    by_item[it.item].push_back(&it);
  }

  std::unordered_map<std::string, bool> user_dead;
  std::unordered_map<std::string, bool> item_dead;
  std::deque<std::pair<bool, std::string>> work;  // (is_user, id)
  for (const auto& [id, d] : user_deg) {
    if (d < k) {
      work.emplace_back(true, id);
      user_dead[id] = true;
    }
  }
  for (const auto& [id, d] : item_deg) {
    if (d < k) {
      work.emplace_back(false, id);
      item_dead[id] = true;
    }
  }
  while (!work.empty()) {
    const auto [is_user, id] = work.front();
    work.pop_front();
    if (is_user) {
      for (const Interaction* it : by_user[id]) {
        if (item_dead[it->item]) {
          continue;
        }
        if (--item_deg[it->item] < k) {
          item_dead[it->item] = true;
          work.emplace_back(false, it->item);
        }
      }
    } else {
      for (const Interaction* it : by_item[id]) {
        if (user_dead[it->user]) {
          continue;
        }
        if (--user_deg[it->user] < k) {
          user_dead[it->user] = true;
          work.emplace_back(true, it->user);
        }
      }
    }
  }

  std::vector<Interaction> result;
  result.reserve(interactions.size());
  for (const auto& it : interactions) {
    if (!user_dead[it.user] && !item_dead[it.item]) {
      result.push_back(it);
    }
  }
  if (result.empty()) {
    throw DataError("k_core_filter: no interactions remain after applying the " +
                    std::to_string(k) + "-core filter");
  }
  return result;
}

}  // namespace hetrofair
