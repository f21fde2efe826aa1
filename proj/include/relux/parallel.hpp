// Copyright 2026 the relu-unwrap authors.
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

#ifndef RELUX_PARALLEL_HPP_
#define RELUX_PARALLEL_HPP_

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace relux {

// Worker count: RELU_UNWRAP_THREADS caps (or raises up to) the hardware
// concurrency; unset or invalid falls back to the hardware value.
inline int max_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("RELU_UNWRAP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v <= 1024) return static_cast<int>(v);
  }
  return static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n). Each index must write only to its own output
// slot: chunk boundaries depend on the thread count, so any cross-index
// accumulation inside fn would break run-to-run byte identity. Reductions
// belong in a sequential pass over the filled slots.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int threads = max_threads();
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t chunk = std::max<std::size_t>(1, n / (static_cast<std::size_t>(threads) * 8));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= n) return;
      const std::size_t end = std::min(n, begin + chunk);
      for (std::size_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace relux

#endif  // RELUX_PARALLEL_HPP_
