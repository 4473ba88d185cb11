/*
 * Copyright 2026 The ABC Bench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Minimal fork-join helpers. Results are always written by index so output
// does not depend on the thread count.

#ifndef ABC_BENCH_PARALLEL_H_
#define ABC_BENCH_PARALLEL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>

namespace abc_bench {

// Thread count from ABC_BENCH_THREADS, else hardware concurrency (>= 1).
int DefaultThreadCount();

// Calls fn(i) for i in [0, count) on up to `threads` workers. fn must be safe
// to call concurrently for distinct i.
void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& fn);

// Independent stream seed for a (base, indices...) cell; splitmix64 mixing.
std::uint64_t DeriveSeed(std::uint64_t base,
                         std::initializer_list<std::uint64_t> indices);

}  // namespace abc_bench

#endif  // ABC_BENCH_PARALLEL_H_
