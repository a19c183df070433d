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

#ifndef ALSEL_CLI_H_
#define ALSEL_CLI_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "alsel/io.h"
#include "alsel/loop_sim.h"

namespace alsel {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitInvalid = 2;

int ExitCodeFor(ErrorCode code);

// Builds the synthetic pool and detector described by `config` and runs the
// loop with class-covering seeding and the probe-set quality proxy.
RunReport RunSimulation(const SimulationConfig& config);

struct AlphaStep {
  int step = 0;
  std::int64_t n_unlabelled = 0;
  double alpha = 0.0;
};

// Alpha after each of `iterations` batches when `seed_size` of `pool_size`
// images start labelled. Stops early once the pool is exhausted.
std::vector<AlphaStep> AlphaSchedule(double alpha0, std::int64_t budget,
                                     std::int64_t pool_size,
                                     std::int64_t seed_size, int iterations);

// Shortest decimal text that parses back to `value`.
std::string FormatDouble(double value);

// `alsel <subcommand> ...`. Returns the process exit code.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace alsel

#endif  // ALSEL_CLI_H_
