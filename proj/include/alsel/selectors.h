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

// Batch selectors. Every selector returns min(budget, #unlabelled) distinct
// unlabelled ids and breaks score ties by the lexicographically lowest
// image_id. `uncertainties` is indexed like `pool.images`; entries of
// labelled images are ignored.

#ifndef ALSEL_SELECTORS_H_
#define ALSEL_SELECTORS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "alsel/core_model.h"
#include "alsel/scoring.h"

namespace alsel {

enum class DiversityNorm {
  kNone,
  // Divide each candidate's diversity by the largest diversity among the
  // remaining candidates at that greedy step.
  kDivideByMax,
};

struct SelectorConfig {
  int budget = 1;
  std::uint64_t seed = 0;
  double alpha0 = 0.5;
  DiversityNorm diversity_norm = DiversityNorm::kDivideByMax;
  EmptyDetectionPolicy empty_policy;
};

void ValidateSelectorConfig(const SelectorConfig& config);

// Running sums of Euclidean distances from a fixed candidate set to a growing
// member set. Inactive candidates are skipped by later updates.
class IncrementalDiversity {
 public:
  IncrementalDiversity(const EmbeddingMatrix& embeddings,
                       std::vector<std::size_t> candidate_rows);

  void AddMember(std::span<const float> member);
  // Equivalent to AddMember for each row, in order.
  void AddMembers(std::span<const std::size_t> member_rows);
  void Deactivate(std::size_t position) { active_[position] = 0; }

  std::size_t member_count() const { return member_count_; }
  std::size_t size() const { return rows_.size(); }
  double sum(std::size_t position) const { return sums_[position]; }
  // Mean distance of a candidate to the members. Requires member_count() > 0.
  double Diversity(std::size_t position) const {
    return sums_[position] / static_cast<double>(member_count_);
  }

 private:
  const EmbeddingMatrix& embeddings_;
  std::vector<std::size_t> rows_;
  std::vector<double> sums_;
  std::vector<char> active_;
  std::size_t member_count_ = 0;
};

// K-means with K = min(budget, #unlabelled) over the unlabelled embeddings,
// then the most uncertain image of every cluster.
SelectionResult SelectMethod1(const Pool& pool,
                              std::span<const double> uncertainties,
                              int budget, std::uint64_t seed);

// Greedy blend of uncertainty and diversity to the labelled set plus the
// picks made so far; the first pick is the most uncertain image.
SelectionResult SelectMethod2(const Pool& pool,
                              std::span<const double> uncertainties,
                              const AlphaState& alpha,
                              const SelectorConfig& config);

// alpha <- clamp(alpha - budget / (2 n_unlabelled), 0, 1).
AlphaState UpdateAlpha(const AlphaState& alpha, std::int64_t budget,
                       std::int64_t n_unlabelled);

SelectionResult SelectRandom(const Pool& pool, int budget, std::uint64_t seed);

SelectionResult SelectTopUncertainty(const Pool& pool,
                                     std::span<const double> uncertainties,
                                     int budget);

// Entropy baselines: aggregator is one of min, max, sum.
SelectionResult SelectRoy(const Pool& pool, int budget, Aggregator aggregator);

// Margin baselines: aggregator is one of sum, avg, max.
SelectionResult SelectBrust(const Pool& pool, int budget,
                            Aggregator aggregator);

// Dispatches on `method`. `alpha` is read only by Method 2.
SelectionResult Select(Method method, const Pool& pool,
                       std::span<const double> uncertainties,
                       const AlphaState& alpha, const SelectorConfig& config);

// Whether `method` consumes per-image uncertainties.
bool UsesUncertainty(Method method);

}  // namespace alsel

#endif  // ALSEL_SELECTORS_H_
