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

// Scoring kernels. All functions are pure; embedding arithmetic is carried
// out in double precision regardless of the 32-bit storage type.

#ifndef ALSEL_SCORING_H_
#define ALSEL_SCORING_H_

#include <span>
#include <string_view>
#include <vector>

#include "alsel/core_model.h"

namespace alsel {

// Uncertainty assigned to an image with no detections.
struct EmptyDetectionPolicy {
  double value = 0.0;
};

void ValidateEmptyPolicy(const EmptyDetectionPolicy& policy);

// Mean of (1 - score) over the detections, or `policy.value` when there are
// none.
double ImageUncertainty(std::span<const Detection> detections,
                        const EmptyDetectionPolicy& policy = {});

double SquaredDistance(std::span<const float> a, std::span<const float> b);
double EuclideanDistance(std::span<const float> a, std::span<const float> b);

// Mean Euclidean distance from `query` to every reference vector.
double MeanEmbeddingDistance(std::span<const float> query,
                             std::span<const std::span<const float>> refs);
// Same, with the references given as rows of `matrix`.
double MeanEmbeddingDistance(std::span<const float> query,
                             const EmbeddingMatrix& matrix,
                             std::span<const std::size_t> ref_rows);

// Shannon entropy in nats, with 0 ln 0 = 0.
double DetectionEntropy(std::span<const double> probs);

// 1 - (p_first - p_second) for the two largest class probabilities.
double DetectionMarginUncertainty(std::span<const double> probs);

enum class Aggregator { kMin, kMax, kSum, kAvg };

std::string_view AggregatorName(Aggregator aggregator);
double Aggregate(std::span<const double> values, Aggregator aggregator,
                 double empty_value);

}  // namespace alsel

#endif  // ALSEL_SCORING_H_
