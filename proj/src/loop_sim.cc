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

#include "alsel/loop_sim.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <unordered_map>

#include "alsel/scoring.h"

namespace alsel {

namespace {

// Re-raises an adapter failure with the iteration it happened in.
[[noreturn]] void RethrowWithIteration(int iteration) {
  const std::string where = "iteration " + std::to_string(iteration) + ": ";
  try {
    throw;
  } catch (const Error& e) {
    throw Error(e.code(), where + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kIo, where + "detector adapter failed: " + e.what());
  }
}

}  // namespace

void ValidateLoopConfig(const LoopConfig& config) {
  auto in_unit = [](double f) { return f > 0.0 && f <= 1.0; };
  if (!in_unit(config.seed_fraction)) {
    ThrowInvalidInput("loop config: seed_fraction must lie in (0,1]");
  }
  if (!in_unit(config.budget_fraction)) {
    ThrowInvalidInput("loop config: budget_fraction must lie in (0,1]");
  }
  if (config.num_iterations < 0) {
    ThrowInvalidInput("loop config: num_iterations must be >= 0");
  }
  if (config.seed_fraction + config.num_iterations * config.budget_fraction >
      1.0 + 1e-9) {
    ThrowInvalidInput(
        "loop config: seed_fraction + num_iterations * budget_fraction "
        "exceeds 1");
  }
  SelectorConfig selector = config.selector;
  selector.budget = std::max(selector.budget, 1);
  ValidateSelectorConfig(selector);
}

std::int64_t SeedSize(const LoopConfig& config, std::size_t pool_size) {
  return std::max<std::int64_t>(
      1, std::llround(config.seed_fraction * static_cast<double>(pool_size)));
}

std::int64_t BudgetSize(const LoopConfig& config, std::size_t pool_size) {
  return std::max<std::int64_t>(
      1, std::llround(config.budget_fraction * static_cast<double>(pool_size)));
}

std::vector<std::string> StratifiedSeedSample(
    const Pool& pool, std::span<const std::vector<int>> image_classes,
    std::size_t n, std::uint64_t seed) {
  if (image_classes.size() != pool.images.size()) {
    ThrowInvalidInput("seed sample: class lists for " +
                      std::to_string(image_classes.size()) + " images, pool has " +
                      std::to_string(pool.images.size()));
  }
  std::set<int> present;
  for (const auto& classes : image_classes) present.insert(classes.begin(), classes.end());
  if (n < present.size()) {
    ThrowInvalidInput("seed sample: n = " + std::to_string(n) +
                      " cannot cover " + std::to_string(present.size()) +
                      " classes");
  }
  if (n > pool.images.size()) {
    ThrowInvalidInput("seed sample: n = " + std::to_string(n) +
                      " exceeds pool size " + std::to_string(pool.images.size()));
  }

  std::mt19937_64 rng(seed);
  std::vector<char> taken(pool.images.size(), 0);
  std::set<int> covered;
  std::vector<std::string> out;
  auto take = [&](std::size_t i) {
    taken[i] = 1;
    covered.insert(image_classes[i].begin(), image_classes[i].end());
    out.push_back(pool.images[i].image_id);
  };
  for (int c : present) {
    if (covered.count(c)) continue;
    std::vector<std::size_t> holders;
    for (std::size_t i = 0; i < pool.images.size(); ++i) {
      if (taken[i]) continue;
      const auto& classes = image_classes[i];
      if (std::find(classes.begin(), classes.end(), c) != classes.end()) {
        holders.push_back(i);
      }
    }
    std::uniform_int_distribution<std::size_t> pick(0, holders.size() - 1);
    take(holders[pick(rng)]);
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < pool.images.size(); ++i) {
    if (!taken[i]) rest.push_back(i);
  }
  const std::size_t fill = n - out.size();
  for (std::size_t p = 0; p < fill; ++p) {
    std::uniform_int_distribution<std::size_t> pick(p, rest.size() - 1);
    std::swap(rest[p], rest[pick(rng)]);
    take(rest[p]);
  }
  return out;
}

double QualityAuc(std::span<const double> quality) {
  if (quality.empty()) return 0.0;
  if (quality.size() == 1) return quality[0];
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < quality.size(); ++i) {
    area += 0.5 * (quality[i] + quality[i + 1]);
  }
  return area / static_cast<double>(quality.size() - 1);
}

RunReport RunLoop(const Pool& input, DetectorAdapter& adapter,
                  const LoopConfig& config, const LoopHooks& hooks) {
  ValidateLoopConfig(config);
  if (auto violations = ValidatePool(input); !violations.empty()) {
    ThrowInvalidInput("loop: invalid pool: " + violations.front());
  }
  if (input.images.empty()) ThrowEmptyPool("loop: pool has no images");

  using Clock = std::chrono::steady_clock;
  Pool pool = input;
  const std::size_t pool_size = pool.images.size();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < pool_size; ++i) index.emplace(pool.images[i].image_id, i);

  RunReport report;
  report.method = config.method;
  report.seed = config.seed;
  report.pool_size = static_cast<std::int64_t>(pool_size);
  report.budget = BudgetSize(config, pool_size);

  const auto seed_start = Clock::now();
  if (pool.CountUnlabelled() == pool_size) {
    const std::size_t n = static_cast<std::size_t>(
        std::min<std::int64_t>(SeedSize(config, pool_size),
                               static_cast<std::int64_t>(pool_size)));
    std::vector<std::vector<int>> classes =
        hooks.image_classes ? *hooks.image_classes
                            : std::vector<std::vector<int>>(pool_size);
    for (const std::string& id :
         StratifiedSeedSample(pool, classes, n, DeriveSeed(config.seed, 0))) {
      pool.images[index.at(id)].status = LabelStatus::kLabelled;
    }
  }
  report.seed_size = static_cast<std::int64_t>(pool_size - pool.CountUnlabelled());
  {
    IterationRecord rec;
    rec.iteration = 0;
    rec.labelled_count = report.seed_size;
    rec.unlabelled_before = static_cast<std::int64_t>(pool_size);
    if (hooks.quality) rec.quality = hooks.quality(pool.LabelledIds());
    rec.wall_seconds =
        std::chrono::duration<double>(Clock::now() - seed_start).count();
    report.iterations.push_back(std::move(rec));
  }

  AlphaState alpha{.value = config.selector.alpha0, .iteration = 0};
  for (int iter = 1; iter <= config.num_iterations; ++iter) {
    const std::size_t unlabelled = pool.CountUnlabelled();
    if (unlabelled == 0) break;
    const auto start = Clock::now();
    const std::vector<std::string> labelled = pool.LabelledIds();

    try {
      adapter.NotifyTrained(labelled);
    } catch (...) {
      RethrowWithIteration(iter);
    }
    std::vector<double> uncertainties(pool_size, 0.0);
    for (std::size_t i = 0; i < pool_size; ++i) {
      ImageRecord& rec = pool.images[i];
      if (rec.labelled()) continue;
      try {
        rec.detections = adapter.Infer(labelled, rec.image_id);
      } catch (...) {
        RethrowWithIteration(iter);
      }
      for (std::size_t j = 0; j < rec.detections.size(); ++j) {
        auto v = ValidateDetection(rec.detections[j], pool.num_classes,
                                   "image '" + rec.image_id + "' detection #" +
                                       std::to_string(j));
        if (!v.empty()) {
          ThrowInvalidInput("iteration " + std::to_string(iter) +
                            ": adapter returned an invalid detection: " +
                            v.front());
        }
      }
      uncertainties[i] =
          ImageUncertainty(rec.detections, config.selector.empty_policy);
    }

    SelectorConfig selector = config.selector;
    selector.budget = static_cast<int>(report.budget);
    selector.seed = DeriveSeed(config.seed, static_cast<std::uint64_t>(iter));
    SelectionResult selection =
        Select(config.method, pool, uncertainties, alpha, selector);
    selection.iteration = iter;

    IterationRecord rec;
    rec.iteration = iter;
    rec.unlabelled_before = static_cast<std::int64_t>(unlabelled);
    if (config.method == Method::kMethod2) rec.alpha = alpha.value;
    for (const std::string& id : selection.selected) {
      ImageRecord& img = pool.images[index.at(id)];
      if (img.labelled()) {
        ThrowInvalidInput("iteration " + std::to_string(iter) + ": image '" +
                          id + "' selected twice");
      }
      img.status = LabelStatus::kLabelled;
    }
    if (config.method == Method::kMethod2) {
      alpha = UpdateAlpha(alpha, report.budget,
                          static_cast<std::int64_t>(unlabelled));
    }
    rec.labelled_count = static_cast<std::int64_t>(pool_size - pool.CountUnlabelled());
    if (hooks.quality) rec.quality = hooks.quality(pool.LabelledIds());
    rec.selection = std::move(selection);
    rec.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    report.iterations.push_back(std::move(rec));
  }

  report.final_labelled = report.iterations.back().labelled_count;
  if (hooks.quality) {
    std::vector<double> q;
    for (const IterationRecord& r : report.iterations) q.push_back(*r.quality);
    report.quality_auc = QualityAuc(q);
  }
  return report;
}

}  // namespace alsel
