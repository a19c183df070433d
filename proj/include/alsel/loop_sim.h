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

// The outer active-learning loop: seed, then repeatedly train, infer on the
// unlabelled pool, score, select and label.

#ifndef ALSEL_LOOP_SIM_H_
#define ALSEL_LOOP_SIM_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alsel/core_model.h"
#include "alsel/selectors.h"

namespace alsel {

// The only channel between a detector and the selectors. Implementations see
// labelled ids and one unlabelled image id at a time; they never receive
// labels of unlabelled images.
class DetectorAdapter {
 public:
  virtual ~DetectorAdapter() = default;

  // Called once per iteration with the labelled set the detector should be
  // considered trained on.
  virtual void NotifyTrained(std::span<const std::string> labelled) = 0;
  virtual std::vector<Detection> Infer(std::span<const std::string> labelled,
                                       std::string_view image_id) = 0;
};

struct LoopConfig {
  double seed_fraction = 0.10;
  double budget_fraction = 0.05;
  int num_iterations = 6;
  Method method = Method::kMethod2;
  std::uint64_t seed = 0;
  // `budget` is overwritten with round(budget_fraction * pool size).
  SelectorConfig selector;
};

void ValidateLoopConfig(const LoopConfig& config);
std::int64_t SeedSize(const LoopConfig& config, std::size_t pool_size);
std::int64_t BudgetSize(const LoopConfig& config, std::size_t pool_size);

struct IterationRecord {
  int iteration = 0;
  // Labelled count after this iteration's batch was labelled.
  std::int64_t labelled_count = 0;
  // Unlabelled count seen by the selector (before the batch).
  std::int64_t unlabelled_before = 0;
  std::optional<SelectionResult> selection;
  // Alpha in effect for this iteration (Method 2 only).
  std::optional<double> alpha;
  std::optional<double> quality;
  double wall_seconds = 0.0;

  bool operator==(const IterationRecord&) const = default;
};

struct RunReport {
  Method method = Method::kRandom;
  std::uint64_t seed = 0;
  std::int64_t pool_size = 0;
  std::int64_t seed_size = 0;
  std::int64_t budget = 0;
  // iterations[0] is the seed set; iterations[i] the i-th selection round.
  std::vector<IterationRecord> iterations;
  std::int64_t final_labelled = 0;
  // Trapezoidal area under the quality curve over iteration index,
  // normalized by the number of rounds (mean curve height).
  std::optional<double> quality_auc;

  bool operator==(const RunReport&) const = default;
};

struct LoopHooks {
  // Latent classes per pool image; enables class-covering seeding. Without
  // it the seed set is drawn uniformly.
  std::optional<std::vector<std::vector<int>>> image_classes;
  // Quality of a detector trained on the given labelled set.
  std::function<double(std::span<const std::string>)> quality;
};

// At least one image per class present in `image_classes` (pool-indexed),
// the rest uniform without replacement. Returns ids in pick order.
std::vector<std::string> StratifiedSeedSample(
    const Pool& pool, std::span<const std::vector<int>> image_classes,
    std::size_t n, std::uint64_t seed);

// Runs the loop on a copy of `pool`. Images already labelled in `pool` form
// the seed set; otherwise a seed set of SeedSize() images is drawn.
RunReport RunLoop(const Pool& pool, DetectorAdapter& adapter,
                  const LoopConfig& config, const LoopHooks& hooks = {});

double QualityAuc(std::span<const double> quality);

}  // namespace alsel

#endif  // ALSEL_LOOP_SIM_H_
