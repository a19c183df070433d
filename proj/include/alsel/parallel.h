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

#ifndef ALSEL_PARALLEL_H_
#define ALSEL_PARALLEL_H_

namespace alsel {

// Applies the ALSEL_THREADS cap (0 or unset = runtime default). Returns the
// worker count now in effect.
int ConfigureThreadsFromEnv();

void SetMaxThreads(int threads);
int MaxThreads();

}  // namespace alsel

#endif  // ALSEL_PARALLEL_H_
