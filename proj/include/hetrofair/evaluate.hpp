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
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hetrofair/metrics.hpp"
#include "hetrofair/ranking.hpp"
#include "hetrofair/threading.hpp"

namespace hetrofair {

struct EvalReport {
  std::string stratum = "all";
  int n = 20;
  std::optional<double> ndcg;
  std::optional<double> mrr;
  std::optional<double> map;
  std::optional<double> pru;
  std::optional<double> pri;
  int users_evaluated = 0;
};

namespace detail {

inline EvalReport report_from_lists(const std::vector<RankedList>& lists,
                                    const std::vector<std::vector<int>>& relevant_sets,
                                    const std::vector<int>& item_train_degree, int N,
                                    const std::string& stratum) {
  EvalReport report;
  report.stratum = stratum;
  report.n = N;
  double ndcg_sum = 0.0, rr_sum = 0.0, ap_sum = 0.0;
  int users = 0;
  for (const auto& rl : lists) {
    const auto& relevant = relevant_sets[rl.user];
    if (relevant.empty()) {
      continue;
    }
    ndcg_sum += ndcg_at(rl, relevant, N);
    rr_sum += reciprocal_rank(rl, relevant);
    ap_sum += average_precision_at(rl, relevant, N);
    ++users;
  }
  report.users_evaluated = users;
  if (users > 0) {
    report.ndcg = ndcg_sum / users;
    report.mrr = rr_sum / users;
    report.map = ap_sum / users;
  }
  report.pru = pru(lists, relevant_sets, item_train_degree);
  report.pri = pri(lists, relevant_sets, item_train_degree);
  return report;
}

}  // namespace detail

// Rankings for every user with at least one train item (per-user lists are
// independent; parallel over users).
inline std::vector<RankedList> rank_all_users(const Matrix& Z, const DatasetSplit& split,
                                              EvalTarget target, int threads = 1) {
  const int num_users = split.num_users();
  std::vector<RankedList> lists(num_users);
  parallel_for(num_users, threads, [&](int begin, int end) {
    for (int u = begin; u < end; ++u) {
      lists[u] = rank_items(Z, split, u, target);
    }
  });
  return lists;
}

inline EvalReport evaluate_split(const Matrix& Z, const DatasetSplit& split, int N,
                                 EvalTarget target, int threads = 1) {
  if (N < 1) {
    throw ValidationError("evaluate: N must be >= 1");
  }
  const auto lists = rank_all_users(Z, split, target, threads);
  const auto& relevant =
      target == EvalTarget::kTest ? split.test_items : split.valid_items;
  return detail::report_from_lists(lists, relevant, split.train_graph.item_degree, N, "all");
}

// Splits items into short-head (top fraction by train degree, boundary ties
// broken by ascending item index) and long-tail, then evaluates each stratum
// on test sets filtered to that stratum's items. Rankings are unchanged:
// candidates still span all non-train items.
inline std::pair<EvalReport, EvalReport> stratified_eval(const Matrix& Z,
                                                         const DatasetSplit& split, int N,
                                                         double fraction = 0.2, int threads = 1) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw ValidationError("stratified_eval: fraction must be in (0, 1]");
  }
  const int num_items = split.num_items();
  std::vector<int> order(num_items);
  std::iota(order.begin(), order.end(), 0);
  const auto& degree = split.train_graph.item_degree;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (degree[a] != degree[b]) {
      return degree[a] > degree[b];
    }
    return a < b;
  });
  const int head_count = static_cast<int>(std::ceil(fraction * num_items));
  std::vector<char> is_short_head(num_items, 0);
  for (int j = 0; j < head_count; ++j) {
    is_short_head[order[j]] = 1;
  }

  std::vector<std::vector<int>> tail_sets(split.num_users());
  std::vector<std::vector<int>> head_sets(split.num_users());
  for (int u = 0; u < split.num_users(); ++u) {
    for (int i : split.test_items[u]) {
      (is_short_head[i] ? head_sets[u] : tail_sets[u]).push_back(i);
    }
  }

  const auto lists = rank_all_users(Z, split, EvalTarget::kTest, threads);
  EvalReport long_tail = detail::report_from_lists(lists, tail_sets, degree, N, "long_tail");
  EvalReport short_head = detail::report_from_lists(lists, head_sets, degree, N, "short_head");
  return {long_tail, short_head};
}

}  // namespace hetrofair
