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
#include <string>
#include <unordered_map>
#include <vector>

#include "hetrofair/interactions.hpp"

namespace hetrofair {

// Immutable bipartite interaction graph. Users occupy indices
// [0, num_users) and items [0, num_items); the stacked node index space used
// by the model places users first and items at num_users + i.
struct InteractionGraph {
  int num_users = 0;
  int num_items = 0;
  std::vector<std::vector<int>> user_adj;  // user -> sorted item indices
  std::vector<std::vector<int>> item_adj;  // item -> sorted user indices
  std::vector<int> user_degree;
  std::vector<int> item_degree;
  // Original string ids in index order (first-appearance order).
  std::vector<std::string> user_ids;
  std::vector<std::string> item_ids;

  std::int64_t num_edges() const {
    std::int64_t e = 0;
    for (const auto& adj : user_adj) {
      e += static_cast<std::int64_t>(adj.size());
    }
    return e;
  }

  int num_nodes() const { return num_users + num_items; }

  double density() const {
    return static_cast<double>(num_edges()) /
           (static_cast<double>(num_users) * static_cast<double>(num_items));
  }

  bool has_edge(int user, int item) const {
    const auto& adj = user_adj[user];
    return std::binary_search(adj.begin(), adj.end(), item);
  }
};

// Contiguous 0-based reindexing in order of first appearance.
inline InteractionGraph build_graph(const std::vector<Interaction>& interactions) {
  if (interactions.empty()) {
    throw DataError("build_graph: empty interaction list");
  }
  InteractionGraph g;
  std::unordered_map<std::string, int> user_index;
  std::unordered_map<std::string, int> item_index;
  user_index.reserve(interactions.size());
  item_index.reserve(interactions.size());
  for (const auto& it : interactions) {
    auto [uit, u_new] = user_index.try_emplace(it.user, g.num_users);
    if (u_new) {
      ++g.num_users;
      g.user_ids.push_back(it.user);
      g.user_adj.emplace_back();
    }
    auto [iit, i_new] = item_index.try_emplace(it.item, g.num_items);
    if (i_new) {
      ++g.num_items;
      g.item_ids.push_back(it.item);
      g.item_adj.emplace_back();
    }
    g.user_adj[uit->second].push_back(iit->second);
    g.item_adj[iit->second].push_back(uit->second);
  }
  for (auto& adj : g.user_adj) {
    std::sort(adj.begin(), adj.end());
  }
  for (auto& adj : g.item_adj) {
    std::sort(adj.begin(), adj.end());
  }
  g.user_degree.resize(g.num_users);
  g.item_degree.resize(g.num_items);
  for (int u = 0; u < g.num_users; ++u) {
    g.user_degree[u] = static_cast<int>(g.user_adj[u].size());
  }
  for (int i = 0; i < g.num_items; ++i) {
    g.item_degree[i] = static_cast<int>(g.item_adj[i].size());
  }
  return g;
}

}  // namespace hetrofair
