// Copyright 2026 The Matforge Authors. All rights reserved.
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

#include "matforge/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace matforge {

namespace {
std::atomic<int> g_default_threads{0};

int auto_threads() {
  if (const char* env = std::getenv("MATFORGE_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}
}  // namespace

void set_default_threads(int n) { g_default_threads.store(n < 0 ? 0 : n); }

int default_threads() {
  int n = g_default_threads.load();
  return n > 0 ? n : auto_threads();
}

int effective_threads(int requested) {
  return requested > 0 ? requested : default_threads();
}

void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& fn,
                     int threads) {
  if (count == 0) return;
  std::size_t workers = static_cast<std::size_t>(effective_threads(threads));
  if (workers > count) workers = count;
  if (workers <= 1) {
    fn(0, count);
    return;
  }

  // Static partition: chunk boundaries depend only on (count, workers)
  // requested, never on scheduling.
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  std::size_t base = count / workers;
  std::size_t rem = count % workers;
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t len = base + (w < rem ? 1 : 0);
    std::size_t end = begin + len;
    if (w + 1 == workers) {
      fn(begin, end);
    } else {
      pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    begin = end;
  }
  for (auto& t : pool) t.join();
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int threads) {
  parallel_chunks(
      count,
      [&fn](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      },
      threads);
}

}  // namespace matforge
