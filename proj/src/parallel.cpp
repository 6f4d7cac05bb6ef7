// Copyright 2026 The rel-toa Authors
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

#include "reltoa/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

#include <omp.h>

namespace reltoa {

int worker_count() {
  const int available = omp_get_max_threads();
  const char* env = std::getenv("REL_TOA_THREADS");
  if (env == nullptr) return available;
  int requested = 0;
  const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), requested);
  if (ec != std::errc() || requested <= 0) return available;
  return requested < available ? requested : available;
}

}  // namespace reltoa
