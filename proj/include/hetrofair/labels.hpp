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

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hetrofair/graph.hpp"

namespace hetrofair {

// Item category labels plus each user's inferred dominant preference label.
// Empty string = no label.
struct LabelTable {
  std::vector<std::string> item_label;
  std::vector<std::string> user_label;
};

// Item labels come from the interaction rows (first label seen per item,
// which load_interactions already guarantees by deduplication). A user's
// dominant label is the most frequent label among their labeled neighbor
// items; ties break to the lexicographically smallest label.
inline LabelTable make_label_table(const InteractionGraph& graph,
                                   const std::vector<Interaction>& interactions) {
  LabelTable t;
  t.item_label.assign(graph.num_items, "");
  t.user_label.assign(graph.num_users, "");

  std::unordered_map<std::string, int> item_index;
  item_index.reserve(graph.item_ids.size());
  for (int i = 0; i < graph.num_items; ++i) {
    item_index.emplace(graph.item_ids[i], i);
  }
  for (const auto& it : interactions) {
    if (it.label.empty()) {
      continue;
    }
    const auto found = item_index.find(it.item);
    if (found != item_index.end() && t.item_label[found->second].empty()) {
      t.item_label[found->second] = it.label;
    }
  }

  // std::map keeps label keys ordered, so the argmax scan naturally breaks
  // count ties toward the smallest label.
  std::map<std::string, int> counts;
  for (int u = 0; u < graph.num_users; ++u) {
    counts.clear();
    for (int i : graph.user_adj[u]) {
      if (!t.item_label[i].empty()) {
        ++counts[t.item_label[i]];
      }
    }
    int best = 0;
    for (const auto& [label, c] : counts) {
      if (c > best) {
        best = c;
        t.user_label[u] = label;
      }
    }
  }
  return t;
}

// Mean label compatibility over edges where both endpoint labels are
// defined. nullopt when no such edge exists (homophily undefined).
inline std::optional<double> homophily_score(const InteractionGraph& graph,
                                             const LabelTable& labels) {
  std::int64_t valid_edges = 0;
  std::int64_t compatible = 0;
  for (int u = 0; u < graph.num_users; ++u) {
    if (labels.user_label[u].empty()) {
      continue;
    }
    for (int i : graph.user_adj[u]) {
      if (labels.item_label[i].empty()) {
        continue;
      }
      ++valid_edges;
      if (labels.user_label[u] == labels.item_label[i]) {
        ++compatible;
      }
    }
  }
  if (valid_edges == 0) {
    return std::nullopt;
  }
  return static_cast<double>(compatible) / static_cast<double>(valid_edges);
}

}  // namespace hetrofair
