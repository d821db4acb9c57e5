// Copyright 2026 The cavo Authors
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

#ifndef CAVO_PARALLEL_H_
#define CAVO_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace cavo {

/// Worker count from CAVO_THREADS, else the hardware concurrency (at least 1).
int worker_count();

/// Runs fn(0..n-1) on up to `workers` threads. Callers write results by index, so the
/// outcome does not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(size_t n, const std::function<void(size_t)> &fn, int workers = worker_count());

}  // namespace cavo

#endif
