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

// Deterministic synthetic fixtures for tests.

#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hetrofair/graph.hpp"
#include "hetrofair/interactions.hpp"
#include "hetrofair/rng.hpp"
#include "hetrofair/split.hpp"

namespace synth {

using hetrofair::Interaction;
using hetrofair::InteractionGraph;
using hetrofair::Rng;

inline std::string user_id(int u) { return "u" + std::to_string(u); }
inline std::string item_id(int i) { return "i" + std::to_string(i); }

// Random bipartite interactions where every user and every item has at least
// one edge.
inline std::vector<Interaction> random_interactions(int num_users, int num_items, int extra_edges,
                                                    std::uint64_t seed) {
  Rng rng(seed);
  std::set<std::pair<int, int>> edges;
  for (int u = 0; u < num_users; ++u) {
    edges.emplace(u, static_cast<int>(rng.below(num_items)));
  }
  for (int i = 0; i < num_items; ++i) {
    edges.emplace(static_cast<int>(rng.below(num_users)), i);
  }
  for (int e = 0; e < extra_edges; ++e) {
    edges.emplace(static_cast<int>(rng.below(num_users)), static_cast<int>(rng.below(num_items)));
  }
  std::vector<Interaction> out;
  for (const auto& [u, i] : edges) {
    out.push_back({user_id(u), item_id(i), "", std::nullopt});
  }
  return out;
}

// Builds a DatasetSplit directly from explicit per-user sets (item indices).
// The union per user becomes the full graph; the train sets become the train
// graph. All sets are stored sorted.
inline hetrofair::DatasetSplit manual_split(int num_users, int num_items,
                                            std::vector<std::vector<int>> train,
                                            std::vector<std::vector<int>> valid,
                                            std::vector<std::vector<int>> test) {
  hetrofair::DatasetSplit split;
  auto sort_all = [](std::vector<std::vector<int>>& sets) {
    for (auto& s : sets) {
      std::sort(s.begin(), s.end());
    }
  };
  sort_all(train);
  sort_all(valid);
  sort_all(test);
  split.train_items = train;
  split.valid_items = valid;
  split.test_items = test;
  auto& g = split.train_graph;
  g.num_users = num_users;
  g.num_items = num_items;
  g.user_adj = train;
  g.item_adj.assign(num_items, {});
  for (int u = 0; u < num_users; ++u) {
    g.user_ids.push_back(user_id(u));
    for (int i : train[u]) {
      g.item_adj[i].push_back(u);
    }
  }
  for (int i = 0; i < num_items; ++i) {
    g.item_ids.push_back(item_id(i));
  }
  g.user_degree.resize(num_users);
  g.item_degree.resize(num_items);
  for (int u = 0; u < num_users; ++u) {
    g.user_degree[u] = static_cast<int>(g.user_adj[u].size());
  }
  for (int i = 0; i < num_items; ++i) {
    g.item_degree[i] = static_cast<int>(g.item_adj[i].size());
  }
  return split;
}

// Random split over a random graph: per user, partitions their items into
// train/valid/test with at least one train item per user, at least one train
// user per item, and no user holding the full catalog.
inline hetrofair::DatasetSplit random_split(int num_users, int num_items, int extra_edges,
                                            std::uint64_t seed) {
  auto interactions = random_interactions(num_users, num_items, extra_edges, seed);
  {
    // trim any user who ended up with every item (no negative would exist)
    std::map<std::string, int> user_deg;
    for (const auto& it : interactions) {
      ++user_deg[it.user];
    }
    std::vector<Interaction> kept;
    std::map<std::string, int> dropped;
    for (const auto& it : interactions) {
      if (user_deg[it.user] >= num_items && dropped[it.user] == 0) {
        ++dropped[it.user];  // drop one edge for that user
        continue;
      }
      kept.push_back(it);
    }
    interactions = std::move(kept);
  }
  const InteractionGraph g = hetrofair::build_graph(interactions);
  Rng rng(seed ^ 0x5eedULL);
  std::vector<std::vector<int>> train(g.num_users), valid(g.num_users), test(g.num_users);
  std::vector<int> item_train_degree(g.num_items, 0);
  for (int u = 0; u < g.num_users; ++u) {
    std::vector<int> items = g.user_adj[u];
    rng.shuffle(items);
    for (std::size_t j = 0; j < items.size(); ++j) {
      if (j == 0) {
        train[u].push_back(items[j]);
        ++item_train_degree[items[j]];
      } else {
        const double r = rng.uniform();
        if (r < 0.6) {
          train[u].push_back(items[j]);
          ++item_train_degree[items[j]];
        } else {
          (r < 0.8 ? valid[u] : test[u]).push_back(items[j]);
        }
      }
    }
  }
  // promote one held-out edge back to train for items nobody trains on
  for (int u = 0; u < g.num_users; ++u) {
    for (auto* held : {&valid[u], &test[u]}) {
      for (auto it = held->begin(); it != held->end();) {
        if (item_train_degree[*it] == 0) {
          train[u].push_back(*it);
          ++item_train_degree[*it];
          it = held->erase(it);
        } else {
          ++it;
        }
      }
    }
  }
  return manual_split(g.num_users, g.num_items, train, valid, test);
}

inline hetrofair::Matrix random_embeddings(int rows, int cols, std::uint64_t seed,
                                           double scale = 1.0) {
  Rng rng(seed);
  hetrofair::Matrix z(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      z(r, c) = rng.uniform(-scale, scale);
    }
  }
  return z;
}

// Unique scratch directory under the system temp dir.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = (std::filesystem::temp_directory_path() /
             ("hetrofair_" + tag + "_" + std::to_string(::getpid()) + "_" +
              std::to_string(counter++)))
                .string();
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::string& path() const { return path_; }
  std::string file(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

// Catalog generator mimicking a small, dense e-commerce dataset: item
// popularity is heavy-tailed, users belong to taste groups and prefer items
// of their own group, and both sides keep a minimum degree so a 10-core pass
// is (almost) a no-op. Labels carry the item's group.
struct CatalogConfig {
  int num_users = 1340;
  int num_items = 733;
  int target_edges = 28798;
  int num_groups = 16;
  double popularity_exponent = 0.95;  // item weight ~ (rank + shift)^-a
  double group_boost = 8.0;           // preference multiplier for own group
  double mix_uniform = 0.10;          // fraction of picks ignoring group
  int min_user_degree = 12;
  int min_item_degree = 12;
  int max_user_degree = 220;
  std::uint64_t seed = 7;
};

inline std::vector<Interaction> catalog_interactions(const CatalogConfig& cfg) {
  Rng rng(cfg.seed);
  const int nu = cfg.num_users;
  const int ni = cfg.num_items;

  // Item groups and popularity weights (heavy tail over a random item order).
  std::vector<int> item_group(ni);
  for (int i = 0; i < ni; ++i) {
    item_group[i] = static_cast<int>(rng.below(cfg.num_groups));
  }
  std::vector<int> pop_rank(ni);
  for (int i = 0; i < ni; ++i) {
    pop_rank[i] = i;
  }
  rng.shuffle(pop_rank);
  std::vector<double> item_weight(ni);
  for (int i = 0; i < ni; ++i) {
    item_weight[i] = std::pow(static_cast<double>(pop_rank[i]) + 8.0, -cfg.popularity_exponent);
  }

  std::vector<int> user_group(nu);
  for (int u = 0; u < nu; ++u) {
    user_group[u] = static_cast<int>(rng.below(cfg.num_groups));
  }

  // Heavy-tailed user degrees, clamped, then scaled toward the edge target.
  std::vector<double> raw(nu);
  double raw_sum = 0.0;
  for (int u = 0; u < nu; ++u) {
    raw[u] = std::exp(rng.normal(0.0, 0.7));
    raw_sum += raw[u];
  }
  std::vector<int> degree(nu);
  int total = 0;
  for (int u = 0; u < nu; ++u) {
    const double share = raw[u] / raw_sum * cfg.target_edges;
    degree[u] = std::clamp(static_cast<int>(share), cfg.min_user_degree, cfg.max_user_degree);
    total += degree[u];
  }
  // Nudge degrees until the total matches the target.
  int guard = 0;
  while (total != cfg.target_edges && ++guard < 10 * cfg.target_edges) {
    const int u = static_cast<int>(rng.below(nu));
    if (total < cfg.target_edges && degree[u] < std::min(cfg.max_user_degree, ni - 1)) {
      ++degree[u];
      ++total;
    } else if (total > cfg.target_edges && degree[u] > cfg.min_user_degree) {
      --degree[u];
      --total;
    }
  }

  // Sample each user's items: weighted by popularity, boosted within the
  // user's group, with a uniform-taste component.
  std::vector<std::set<int>> chosen(nu);
  std::vector<int> item_degree(ni, 0);
  auto pick_weighted = [&](int u) {
    double sum = 0.0;
    for (int i = 0; i < ni; ++i) {
      if (chosen[u].count(i)) {
        continue;
      }
      const double boost = item_group[i] == user_group[u] ? cfg.group_boost : 1.0;
      sum += item_weight[i] * boost;
    }
    double roll = rng.uniform() * sum;
    for (int i = 0; i < ni; ++i) {
      if (chosen[u].count(i)) {
        continue;
      }
      const double boost = item_group[i] == user_group[u] ? cfg.group_boost : 1.0;
      roll -= item_weight[i] * boost;
      if (roll <= 0.0) {
        return i;
      }
    }
    return ni - 1;
  };
  auto pick_uniform = [&](int u) {
    int i = static_cast<int>(rng.below(ni));
    while (chosen[u].count(i)) {
      i = static_cast<int>(rng.below(ni));
    }
    return i;
  };
  for (int u = 0; u < nu; ++u) {
    while (static_cast<int>(chosen[u].size()) < degree[u]) {
      const int i = rng.uniform() < cfg.mix_uniform ? pick_uniform(u) : pick_weighted(u);
      if (chosen[u].insert(i).second) {
        ++item_degree[i];
      }
    }
  }

  // Repair pass: lift cold items to the minimum degree by moving picks from
  // the hottest items of users not yet connected to the cold item.
  for (int i = 0; i < ni; ++i) {
    while (item_degree[i] < cfg.min_item_degree) {
      const int u = static_cast<int>(rng.below(nu));
      if (chosen[u].count(i)) {
        continue;
      }
      int hottest = -1;
      for (int j : chosen[u]) {
        if (item_degree[j] > cfg.min_item_degree &&
            (hottest < 0 || item_degree[j] > item_degree[hottest])) {
          hottest = j;
        }
      }
      if (hottest < 0) {
        continue;
      }
      chosen[u].erase(hottest);
      --item_degree[hottest];
      chosen[u].insert(i);
      ++item_degree[i];
    }
  }

  std::vector<Interaction> out;
  out.reserve(cfg.target_edges);
  for (int u = 0; u < nu; ++u) {
    for (int i : chosen[u]) {
      out.push_back({user_id(u), item_id(i), "g" + std::to_string(item_group[i]), std::nullopt});
    }
  }
  return out;
}

}  // namespace synth
