/*  topostat
 *  ========
 *  Copyright (C) 2026 The topostat Authors
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace topostat {

/// Worker count used by parallel_for. Defaults to TOPOSTAT_THREADS when set,
/// otherwise std::thread::hardware_concurrency().
std::size_t thread_count();

/// Overrides the worker count; 0 restores the default.
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, n). Every index is visited exactly once, so
/// results written to per-index slots do not depend on scheduling. The first
/// exception thrown by any body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// splitmix64 finalizer; used to derive independent RNG streams from
/// (seed, stream index).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace topostat
