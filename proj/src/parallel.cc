// Copyright 2026 The alsel Authors.
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

#include "alsel/parallel.h"

#include <omp.h>

#include <cstdlib>
#include <string>

#include "alsel/core_model.h"

namespace alsel {

int ConfigureThreadsFromEnv() {
  const char* env = std::getenv("ALSEL_THREADS");
  if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 0) {
      ThrowInvalidInput(std::string("ALSEL_THREADS must be a non-negative "
                                    "integer, got '") + env + "'");
    }
    if (n > 0) SetMaxThreads(static_cast<int>(n));
  }
  return MaxThreads();
}

void SetMaxThreads(int threads) {
  omp_set_num_threads(threads > 0 ? threads : omp_get_num_procs());
}

int MaxThreads() { return omp_get_max_threads(); }

}  // namespace alsel
