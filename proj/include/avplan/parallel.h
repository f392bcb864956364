// Copyright 2026 The avplan Authors
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

#ifndef AVPLAN_PARALLEL_H_
#define AVPLAN_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace avplan {

// Worker cap: AVPLAN_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Calls body(i) for i in [0, n) across up to worker_count() threads. Each
// index is processed exactly once; callers write results by index so the
// outcome does not depend on scheduling. If any call throws, the exception
// from the lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace avplan

#endif  // AVPLAN_PARALLEL_H_
