// Copyright 2026 The inhomog Authors
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
#include <thread>
#include <vector>

namespace inhomog {

inline int default_thread_count() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

// Static partition of [0, n) into contiguous chunks, one per worker.
// fn(chunk_index, begin, end) runs on its own thread; results must be
// written to per-chunk slots so the merge order does not depend on timing.
template <typename Fn>
void parallel_chunks(std::int64_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    if (n > 0) fn(0, std::int64_t{0}, n);
    return;
  }
  const int k = static_cast<int>(std::min<std::int64_t>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(k);
  for (int i = 0; i < k; ++i) {
    const std::int64_t begin = n * i / k;
    const std::int64_t end = n * (i + 1) / k;
    pool.emplace_back([&fn, i, begin, end] { fn(i, begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace inhomog
