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
#include <thread>
#include <vector>

namespace hetrofair {

// Static range partition. Each invocation of fn owns a disjoint [begin, end)
// range, so results are independent of the thread count as long as fn writes
// only to slots indexed by its range. All reductions elsewhere run in a fixed
// order; parallelism never changes any output bit.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  if (n <= 0) {
    return;
  }
  if (threads <= 1 || n == 1) {
    fn(0, n);
    return;
  }
  const int workers = std::min(threads, n);
  const int chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    const int begin = t * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) {
      break;
    }
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) {
    th.join();
  }
}

}  // namespace hetrofair
