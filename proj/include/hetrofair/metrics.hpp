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
#include <numeric>
#include <optional>
#include <vector>

#include "hetrofair/common.hpp"
#include "hetrofair/ranking.hpp"

namespace hetrofair {

// NDCG@N with binary relevance:
//   DCG@N  = sum_{pos=1..N} (2^r(pos) - 1) / log2(pos + 1)
//   IDCG@N = sum_{pos=1..min(|relevant|, N)} 1 / log2(pos + 1)
// `relevant` must be sorted (searched with binary search) and non-empty.
inline double ndcg_at(const RankedList& ranked, const std::vector<int>& relevant, int N) {
  double dcg = 0.0;
  const int limit = std::min<int>(N, static_cast<int>(ranked.items.size()));
  for (int pos = 1; pos <= limit; ++pos) {
    if (std::binary_search(relevant.begin(), relevant.end(), ranked.items[pos - 1])) {
      dcg += 1.0 / std::log2(static_cast<double>(pos) + 1.0);
    }
  }
  double idcg = 0.0;
  const int ideal = std::min<int>(N, static_cast<int>(relevant.size()));
  for (int pos = 1; pos <= ideal; ++pos) {
    idcg += 1.0 / std::log2(static_cast<double>(pos) + 1.0);
  }
  return dcg / idcg;
}

// Reciprocal rank of the first relevant item in the full ranking.
inline double reciprocal_rank(const RankedList& ranked, const std::vector<int>& relevant) {
  int first = 0;
  for (int i : relevant) {
    const int r = ranked.rank_of[i];
    if (r > 0 && (first == 0 || r < first)) {
      first = r;
    }
  }
  return first > 0 ? 1.0 / first : 0.0;
}

// AP@N = (1 / |relevant|) * sum_{pos=1..N} P@pos * r(pos).
inline double average_precision_at(const RankedList& ranked, const std::vector<int>& relevant,
                                   int N) {
  double ap = 0.0;
  int hits = 0;
  const int limit = std::min<int>(N, static_cast<int>(ranked.items.size()));
  for (int pos = 1; pos <= limit; ++pos) {
    if (std::binary_search(relevant.begin(), relevant.end(), ranked.items[pos - 1])) {
      ++hits;
      ap += static_cast<double>(hits) / pos;
    }
  }
  return ap / static_cast<double>(relevant.size());
}

namespace detail {

// Fractional ranks with ties averaged, 1-based.
inline std::vector<double> fractional_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (values[a] != values[b]) {
      return values[a] < values[b];
    }
    return a < b;
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t run_end = pos + 1;
    while (run_end < n && values[order[run_end]] == values[order[pos]]) {
      ++run_end;
    }
    const double avg = 0.5 * (static_cast<double>(pos + 1) + static_cast<double>(run_end));
    for (std::size_t j = pos; j < run_end; ++j) {
      ranks[order[j]] = avg;
    }
    pos = run_end;
  }
  return ranks;
}

}  // namespace detail

// Spearman's rank correlation with average ranks for ties (Pearson on the
// rank vectors). Undefined (nullopt) for fewer than two points or when
// either side has zero variance.
inline std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw ValidationError("spearman: input lengths differ");
  }
  const std::size_t n = x.size();
  if (n < 2) {
    return std::nullopt;
  }
  const std::vector<double> rx = detail::fractional_ranks(x);
  const std::vector<double> ry = detail::fractional_ranks(y);
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += rx[i];
    mean_y += ry[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = rx[i] - mean_x;
    const double dy = ry[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    return std::nullopt;
  }
  return sxy / std::sqrt(sxx * syy);
}

// Per-user popularity-rank correlation, negated and averaged:
//   PRU = -mean_u SRC(train degrees of u's test items, their ranks in u's
//   list).
// Users whose correlation is undefined (fewer than two test items, or all
// test-item degrees tied) are excluded from the mean. Degrees are train-graph
// degrees so test edges never leak in.
inline std::optional<double> pru(const std::vector<RankedList>& ranked_lists,
                                 const std::vector<std::vector<int>>& test_sets,
                                 const std::vector<int>& item_train_degree) {
  double sum = 0.0;
  int contributing = 0;
  std::vector<double> degrees, ranks;
  for (const auto& rl : ranked_lists) {
    const auto& test = test_sets[rl.user];
    if (test.size() < 2) {
      continue;
    }
    degrees.clear();
    ranks.clear();
    for (int i : test) {
      if (rl.rank_of[i] == 0) {
        continue;  // excluded from candidates; cannot happen for test items
      }
      degrees.push_back(static_cast<double>(item_train_degree[i]));
      ranks.push_back(static_cast<double>(rl.rank_of[i]));
    }
    const auto src = spearman(degrees, ranks);
    if (!src.has_value()) {
      continue;
    }
    sum += *src;
    ++contributing;
  }
  if (contributing == 0) {
    return std::nullopt;
  }
  return -sum / contributing;
}

// Item-side counterpart: for each item with a non-empty test-user set,
// average its rank across those users, then
//   PRI = -SRC(item train degree, average rank)
// over the qualifying items.
inline std::optional<double> pri(const std::vector<RankedList>& ranked_lists,
                                 const std::vector<std::vector<int>>& test_sets,
                                 const std::vector<int>& item_train_degree) {
  const std::size_t num_items = item_train_degree.size();
  std::vector<double> rank_sum(num_items, 0.0);
  std::vector<int> rank_count(num_items, 0);
  for (const auto& rl : ranked_lists) {
    for (int i : test_sets[rl.user]) {
      if (rl.rank_of[i] > 0) {
        rank_sum[i] += rl.rank_of[i];
        ++rank_count[i];
      }
    }
  }
  std::vector<double> degrees, avg_ranks;
  for (std::size_t i = 0; i < num_items; ++i) {
    if (rank_count[i] > 0) {
      degrees.push_back(static_cast<double>(item_train_degree[i]));
      avg_ranks.push_back(rank_sum[i] / rank_count[i]);
    }
  }
  if (degrees.size() < 2) {
    return std::nullopt;
  }
  const auto src = spearman(degrees, avg_ranks);
  if (!src.has_value()) {
    return std::nullopt;
  }
  return -*src;
}

}  // namespace hetrofair
