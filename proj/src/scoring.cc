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

#include "alsel/scoring.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace alsel {

namespace {

void CheckDistribution(std::span<const double> probs, std::string_view op) {
  if (probs.empty()) {
    ThrowInvalidInput(std::string(op) + ": empty class distribution");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      ThrowInvalidInput(std::string(op) + ": probability outside [0,1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    std::ostringstream os;
    os.precision(17);
    os << op << ": probabilities sum to " << sum;
    ThrowInvalidInput(os.str());
  }
}

}  // namespace

void ValidateEmptyPolicy(const EmptyDetectionPolicy& policy) {
  if (!(policy.value >= 0.0 && policy.value <= 1.0)) {
    ThrowInvalidInput("empty-detection uncertainty must lie in [0,1]");
  }
}

double ImageUncertainty(std::span<const Detection> detections,
                        const EmptyDetectionPolicy& policy) {
  if (detections.empty()) {
    ValidateEmptyPolicy(policy);
    return policy.value;
  }
  double sum = 0.0;
  for (const Detection& d : detections) {
    if (!(d.score >= 0.0 && d.score <= 1.0)) {
      std::ostringstream os;
      os << "detection score " << d.score << " outside [0,1]";
      ThrowInvalidInput(os.str());
    }
    sum += 1.0 - d.score;
  }
  return sum / static_cast<double>(detections.size());
}

double SquaredDistance(std::span<const float> a, std::span<const float> b) {
  // Eight independent lanes so the loop vectorizes without reassociation.
  constexpr std::size_t kLanes = 8;
  double acc[kLanes] = {};
  const std::size_t n = a.size();
  const std::size_t blocked = n - n % kLanes;
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      const double d =
          static_cast<double>(a[i + l]) - static_cast<double>(b[i + l]);
      acc[l] += d * d;
    }
  }
  for (std::size_t i = blocked; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc[i - blocked] += d * d;
  }
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
         ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

double EuclideanDistance(std::span<const float> a, std::span<const float> b) {
  return std::sqrt(SquaredDistance(a, b));
}

double MeanEmbeddingDistance(std::span<const float> query,
                             std::span<const std::span<const float>> refs) {
  if (refs.empty()) ThrowInvalidInput("mean distance: empty reference set");
  double sum = 0.0;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (refs[i].size() != query.size()) {
      ThrowInvalidInput("mean distance: reference #" + std::to_string(i) +
                        " has dimension " + std::to_string(refs[i].size()) +
                        ", query has " + std::to_string(query.size()));
    }
    sum += EuclideanDistance(query, refs[i]);
  }
  return sum / static_cast<double>(refs.size());
}

double MeanEmbeddingDistance(std::span<const float> query,
                             const EmbeddingMatrix& matrix,
                             std::span<const std::size_t> ref_rows) {
  if (ref_rows.empty()) ThrowInvalidInput("mean distance: empty reference set");
  if (query.size() != matrix.dim()) {
    ThrowInvalidInput("mean distance: query dimension " +
                      std::to_string(query.size()) + " != matrix dimension " +
                      std::to_string(matrix.dim()));
  }
  double sum = 0.0;
  for (std::size_t r : ref_rows) {
    if (r >= matrix.rows()) ThrowInvalidInput("mean distance: row out of range");
    sum += EuclideanDistance(query, matrix.row(r));
  }
  return sum / static_cast<double>(ref_rows.size());
}

double DetectionEntropy(std::span<const double> probs) {
  CheckDistribution(probs, "entropy");
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return std::max(h, 0.0);
}

double DetectionMarginUncertainty(std::span<const double> probs) {
  if (probs.size() < 2) {
    ThrowInvalidInput("margin: needs at least two classes, got " +
                      std::to_string(probs.size()));
  }
  CheckDistribution(probs, "margin");
  double first = -1.0;
  double second = -1.0;
  for (double p : probs) {
    if (p > first) {
      second = first;
      first = p;
    } else if (p > second) {
      second = p;
    }
  }
  return 1.0 - (first - second);
}

std::string_view AggregatorName(Aggregator aggregator) {
  switch (aggregator) {
    case Aggregator::kMin:
      return "min";
    case Aggregator::kMax:
      return "max";
    case Aggregator::kSum:
      return "sum";
    case Aggregator::kAvg:
      return "avg";
  }
  return "unknown";
}

double Aggregate(std::span<const double> values, Aggregator aggregator,
                 double empty_value) {
  if (values.empty()) return empty_value;
  switch (aggregator) {
    case Aggregator::kMin:
      return *std::min_element(values.begin(), values.end());
    case Aggregator::kMax:
      return *std::max_element(values.begin(), values.end());
    case Aggregator::kSum:
    case Aggregator::kAvg: {
      double sum = 0.0;
      for (double v : values) sum += v;
      return aggregator == Aggregator::kSum
                 ? sum
                 : sum / static_cast<double>(values.size());
    }
  }
  return empty_value;
}

}  // namespace alsel
