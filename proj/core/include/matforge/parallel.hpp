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

#pragma once

#include <cstddef>
#include <functional>

namespace matforge {

// Global worker cap: 0 means "auto" (hardware concurrency, or the
// MATFORGE_THREADS environment variable when set). The CLI wires --threads
// to this.
void set_default_threads(int n);
int default_threads();

// Resolves a requested thread count (0 = use the global default).
int effective_threads(int requested);

// Runs fn over contiguous index ranges [begin, end). Chunks are a static
// partition of [0, count), so results written to disjoint per-index slots
// are identical for every thread count.
void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t begin, std::size_t end)>& fn,
                     int threads = 0);

// Per-index convenience wrapper over parallel_chunks.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int threads = 0);

}  // namespace matforge
