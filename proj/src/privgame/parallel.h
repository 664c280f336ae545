// Copyright 2026 The privgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef PRIVGAME_PARALLEL_H_
#define PRIVGAME_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace privgame {

// Worker count: PRIVGAME_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int WorkerCount();

// Runs body(i) for i in [0, count) on a bounded pool of WorkerCount() threads.
// Each index is handled exactly once; callers write results into slot i so the
// output order never depends on scheduling.
void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace privgame

#endif  // PRIVGAME_PARALLEL_H_
