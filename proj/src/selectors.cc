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

#include "alsel/selectors.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "alsel/clustering.h"

namespace alsel {

namespace {

// Unlabelled pool indices in ascending image_id order, so that "first
// maximum" is the lowest-id tie-break everywhere below.
std::vector<std::size_t> Candidates(const Pool& pool, std::string_view op) {
  std::vector<std::size_t> out = pool.UnlabelledIndices();
  if (out.empty()) ThrowEmptyPool(std::string(op) + ": no unlabelled images");
  std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    return pool.images[a].image_id < pool.images[b].image_id;
  });
  for (std::size_t i : out) {
    if (pool.images[i].embedding_index >= pool.embeddings.rows()) {
      ThrowInvalidInput(std::string(op) + ": image '" +
                        pool.images[i].image_id +
                        "' has no row in the embedding matrix");
    }
  }
  return out;
}

void CheckBudget(int budget, std::string_view op) {
  if (budget < 1) {
    ThrowInvalidInput(std::string(op) + ": budget must be >= 1, got " +
                      std::to_string(budget));
  }
}

void CheckUncertainties(const Pool& pool, std::span<const double> u,
                        std::span<const std::size_t> candidates,
                        std::string_view op) {
  if (u.size() != pool.images.size()) {
    ThrowInvalidInput(std::string(op) + ": " + std::to_string(u.size()) +
                      " uncertainties for " +
                      std::to_string(pool.images.size()) + " images");
  }
  for (std::size_t i : candidates) {
    if (!std::isfinite(u[i])) {
      ThrowInvalidInput(std::string(op) + ": non-finite uncertainty for '" +
                        pool.images[i].image_id + "'");
    }
  }
}

SelectionResult TopByScore(const Pool& pool, Method method,
                           std::vector<std::size_t> candidates,
                           const std::vector<double>& score, int budget) {
  // `candidates` is id-sorted; a stable sort keeps that order among ties.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) {
                     return score[a] > score[b];
                   });
  const std::size_t take =
      std::min(candidates.size(), static_cast<std::size_t>(budget));
  SelectionResult out;
  out.method = method;
  for (std::size_t p = 0; p < take; ++p) {
    const std::size_t i = candidates[p];
    out.selected.push_back(pool.images[i].image_id);
    out.audit.push_back({.image_id = pool.images[i].image_id,
                         .uncertainty = score[i],
                         .score = score[i]});
  }
  return out;
}

const std::vector<double>& RequireProbs(const Pool& pool, std::size_t image,
                                        std::size_t detection,
                                        std::string_view op) {
  const Detection& d = pool.images[image].detections[detection];
  if (!d.probs) {
    ThrowInvalidInput(std::string(op) + ": image '" +
                      pool.images[image].image_id + "' detection #" +
                      std::to_string(detection) +
                      " has no class-probability vector");
  }
  return *d.probs;
}

}  // namespace

void ValidateSelectorConfig(const SelectorConfig& config) {
  CheckBudget(config.budget, "selector config");
  if (!(config.alpha0 >= 0.0 && config.alpha0 <= 1.0)) {
    ThrowInvalidInput("selector config: alpha0 must lie in [0,1]");
  }
  ValidateEmptyPolicy(config.empty_policy);
}

IncrementalDiversity::IncrementalDiversity(
    const EmbeddingMatrix& embeddings, std::vector<std::size_t> candidate_rows)
    : embeddings_(embeddings),
      rows_(std::move(candidate_rows)),
      sums_(rows_.size(), 0.0),
      active_(rows_.size(), 1) {
  for (std::size_t r : rows_) {
    if (r >= embeddings_.rows()) {
      ThrowInvalidInput("diversity: candidate row " + std::to_string(r) +
                        " out of range");
    }
  }
}

void IncrementalDiversity::AddMember(std::span<const float> member) {
  if (member.size() != embeddings_.dim()) {
    ThrowInvalidInput("diversity: member dimension " +
                      std::to_string(member.size()) + " != " +
                      std::to_string(embeddings_.dim()));
  }
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(rows_.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < n; ++p) {
    const std::size_t pp = static_cast<std::size_t>(p);
    if (!active_[pp]) continue;
    sums_[pp] += EuclideanDistance(embeddings_.row(rows_[pp]), member);
  }
  ++member_count_;
}

void IncrementalDiversity::AddMembers(std::span<const std::size_t> member_rows) {
  if (member_rows.empty()) return;
  for (std::size_t r : member_rows) {
    if (r >= embeddings_.rows()) {
      ThrowInvalidInput("diversity: member row " + std::to_string(r) +
                        " out of range");
    }
  }
  // Members are tiled so a tile stays cache-resident while every candidate
  // streams past it. Per-candidate addition order is still the member order,
  // which keeps the sums bit-identical to repeated AddMember calls.
  constexpr std::size_t kTile = 32;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(rows_.size());
  for (std::size_t begin = 0; begin < member_rows.size(); begin += kTile) {
    const std::size_t end = std::min(member_rows.size(), begin + kTile);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < n; ++p) {
      const std::size_t pp = static_cast<std::size_t>(p);
      if (!active_[pp]) continue;
      std::span<const float> x = embeddings_.row(rows_[pp]);
      double s = sums_[pp];
      for (std::size_t m = begin; m < end; ++m) {
        s += EuclideanDistance(x, embeddings_.row(member_rows[m]));
      }
      sums_[pp] = s;
    }
  }
  member_count_ += member_rows.size();
}

SelectionResult SelectMethod1(const Pool& pool,
                              std::span<const double> uncertainties,
                              int budget, std::uint64_t seed) {
  CheckBudget(budget, "method1");
  const std::vector<std::size_t> candidates = Candidates(pool, "method1");
  CheckUncertainties(pool, uncertainties, candidates, "method1");
  const std::size_t k =
      std::min(candidates.size(), static_cast<std::size_t>(budget));

  std::vector<int> cluster_of(candidates.size());
  if (k == candidates.size()) {
    std::iota(cluster_of.begin(), cluster_of.end(), 0);
  } else {
    std::vector<std::size_t> rows;
    rows.reserve(candidates.size());
    for (std::size_t i : candidates) rows.push_back(pool.images[i].embedding_index);
    KMeansOptions options;
    options.k = k;
    options.seed = seed;
    cluster_of = KMeans(pool.embeddings, rows, options).assignments;
  }

  std::vector<std::size_t> best(k, candidates.size());
  for (std::size_t p = 0; p < candidates.size(); ++p) {
    std::size_t& b = best[static_cast<std::size_t>(cluster_of[p])];
    if (b == candidates.size() ||
        uncertainties[candidates[p]] > uncertainties[candidates[b]]) {
      b = p;
    }
  }

  SelectionResult out;
  out.method = Method::kMethod1;
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t i = candidates[best[c]];
    out.selected.push_back(pool.images[i].image_id);
    out.audit.push_back({.image_id = pool.images[i].image_id,
                         .uncertainty = uncertainties[i],
                         .score = uncertainties[i],
                         .cluster = static_cast<int>(c)});
  }
  return out;
}

SelectionResult SelectMethod2(const Pool& pool,
                              std::span<const double> uncertainties,
                              const AlphaState& alpha,
                              const SelectorConfig& config) {
  ValidateSelectorConfig(config);
  if (!(alpha.value >= 0.0 && alpha.value <= 1.0)) {
    ThrowInvalidInput("method2: alpha must lie in [0,1]");
  }
  const std::vector<std::size_t> candidates = Candidates(pool, "method2");
  CheckUncertainties(pool, uncertainties, candidates, "method2");

  std::vector<std::size_t> rows;
  rows.reserve(candidates.size());
  for (std::size_t i : candidates) rows.push_back(pool.images[i].embedding_index);
  IncrementalDiversity diversity(pool.embeddings, rows);
  std::vector<std::size_t> labelled_rows;
  for (std::size_t i : pool.LabelledIndices()) {
    if (pool.images[i].embedding_index >= pool.embeddings.rows()) {
      ThrowInvalidInput("method2: labelled image '" + pool.images[i].image_id +
                        "' has no row in the embedding matrix");
    }
    labelled_rows.push_back(pool.images[i].embedding_index);
  }
  diversity.AddMembers(labelled_rows);

  const std::size_t n = candidates.size();
  const std::size_t take = std::min(n, static_cast<std::size_t>(config.budget));
  const double a = alpha.value;
  std::vector<char> remaining(n, 1);
  std::vector<double> v(n, 0.0);

  SelectionResult out;
  out.method = Method::kMethod2;
  out.alpha_used = a;
  for (std::size_t step = 0; step < take; ++step) {
    std::size_t pick = n;
    PickAudit audit;
    if (step == 0) {
      for (std::size_t p = 0; p < n; ++p) {
        if (pick == n ||
            uncertainties[candidates[p]] > uncertainties[candidates[pick]]) {
          pick = p;
        }
      }
      audit.score = uncertainties[candidates[pick]];
      if (diversity.member_count() > 0) audit.diversity = diversity.Diversity(pick);
    } else {
      double v_max = 0.0;
      for (std::size_t p = 0; p < n; ++p) {
        if (!remaining[p]) continue;
        v[p] = diversity.Diversity(p);
        v_max = std::max(v_max, v[p]);
      }
      const double scale =
          config.diversity_norm == DiversityNorm::kDivideByMax
              ? (v_max > 0.0 ? 1.0 / v_max : 0.0)
              : 1.0;
      double best_z = 0.0;
      for (std::size_t p = 0; p < n; ++p) {
        if (!remaining[p]) continue;
        const double z =
            (1.0 - a) * uncertainties[candidates[p]] + a * (v[p] * scale);
        if (pick == n || z > best_z) {
          pick = p;
          best_z = z;
        }
      }
      audit.diversity = v[pick];
      audit.score = best_z;
    }
    const std::size_t i = candidates[pick];
    audit.image_id = pool.images[i].image_id;
    audit.uncertainty = uncertainties[i];
    out.selected.push_back(audit.image_id);
    out.audit.push_back(std::move(audit));
    remaining[pick] = 0;
    diversity.Deactivate(pick);
    if (step + 1 < take) diversity.AddMember(pool.embeddings.row(rows[pick]));
  }
  return out;
}

AlphaState UpdateAlpha(const AlphaState& alpha, std::int64_t budget,
                       std::int64_t n_unlabelled) {
  if (n_unlabelled < 1) {
    ThrowInvalidInput("alpha update: number of unlabelled images must be >= 1");
  }
  if (budget < 0) ThrowInvalidInput("alpha update: budget must be >= 0");
  const double step = static_cast<double>(budget) /
                      (2.0 * static_cast<double>(n_unlabelled));
  return {.value = std::clamp(alpha.value - step, 0.0, 1.0),
          .iteration = alpha.iteration + 1};
}

SelectionResult SelectRandom(const Pool& pool, int budget, std::uint64_t seed) {
  CheckBudget(budget, "random");
  std::vector<std::size_t> candidates = Candidates(pool, "random");
  const std::size_t take =
      std::min(candidates.size(), static_cast<std::size_t>(budget));
  std::mt19937_64 rng(seed);
  for (std::size_t p = 0; p < take; ++p) {
    std::uniform_int_distribution<std::size_t> pick(p, candidates.size() - 1);
    std::swap(candidates[p], candidates[pick(rng)]);
  }
  SelectionResult out;
  out.method = Method::kRandom;
  for (std::size_t p = 0; p < take; ++p) {
    const std::string& id = pool.images[candidates[p]].image_id;
    out.selected.push_back(id);
    out.audit.push_back({.image_id = id});
  }
  return out;
}

SelectionResult SelectTopUncertainty(const Pool& pool,
                                     std::span<const double> uncertainties,
                                     int budget) {
  CheckBudget(budget, "uncert");
  std::vector<std::size_t> candidates = Candidates(pool, "uncert");
  CheckUncertainties(pool, uncertainties, candidates, "uncert");
  std::vector<double> score(uncertainties.begin(), uncertainties.end());
  return TopByScore(pool, Method::kUncertainty, std::move(candidates), score,
                    budget);
}

SelectionResult SelectRoy(const Pool& pool, int budget, Aggregator aggregator) {
  Method method;
  switch (aggregator) {
    case Aggregator::kMin:
      method = Method::kRoyMin;
      break;
    case Aggregator::kMax:
      method = Method::kRoyMax;
      break;
    case Aggregator::kSum:
      method = Method::kRoySum;
      break;
    default:
      ThrowInvalidInput("roy: aggregator must be min, max or sum");
  }
  CheckBudget(budget, "roy");
  std::vector<std::size_t> candidates = Candidates(pool, "roy");
  std::vector<double> score(pool.images.size(), 0.0);
  std::vector<double> per_detection;
  for (std::size_t i : candidates) {
    per_detection.clear();
    for (std::size_t j = 0; j < pool.images[i].detections.size(); ++j) {
      per_detection.push_back(DetectionEntropy(RequireProbs(pool, i, j, "roy")));
    }
    score[i] = Aggregate(per_detection, aggregator, 0.0);
  }
  return TopByScore(pool, method, std::move(candidates), score, budget);
}

SelectionResult SelectBrust(const Pool& pool, int budget,
                            Aggregator aggregator) {
  Method method;
  switch (aggregator) {
    case Aggregator::kSum:
      method = Method::kBrustSum;
      break;
    case Aggregator::kAvg:
      method = Method::kBrustAvg;
      break;
    case Aggregator::kMax:
      method = Method::kBrustMax;
      break;
    default:
      ThrowInvalidInput("brust: aggregator must be sum, avg or max");
  }
  CheckBudget(budget, "brust");
  if (pool.num_classes < 2) {
    ThrowInvalidInput("brust: margin scores need at least two classes");
  }
  std::vector<std::size_t> candidates = Candidates(pool, "brust");
  std::vector<double> score(pool.images.size(), 0.0);
  std::vector<double> per_detection;
  for (std::size_t i : candidates) {
    per_detection.clear();
    for (std::size_t j = 0; j < pool.images[i].detections.size(); ++j) {
      per_detection.push_back(
          DetectionMarginUncertainty(RequireProbs(pool, i, j, "brust")));
    }
    score[i] = Aggregate(per_detection, aggregator, 0.0);
  }
  return TopByScore(pool, method, std::move(candidates), score, budget);
}

bool UsesUncertainty(Method method) {
  return method == Method::kMethod1 || method == Method::kMethod2 ||
         method == Method::kUncertainty;
}

SelectionResult Select(Method method, const Pool& pool,
                       std::span<const double> uncertainties,
                       const AlphaState& alpha, const SelectorConfig& config) {
  switch (method) {
    case Method::kMethod1:
      return SelectMethod1(pool, uncertainties, config.budget, config.seed);
    case Method::kMethod2:
      return SelectMethod2(pool, uncertainties, alpha, config);
    case Method::kRandom:
      return SelectRandom(pool, config.budget, config.seed);
    case Method::kUncertainty:
      return SelectTopUncertainty(pool, uncertainties, config.budget);
    case Method::kRoyMin:
      return SelectRoy(pool, config.budget, Aggregator::kMin);
    case Method::kRoyMax:
      return SelectRoy(pool, config.budget, Aggregator::kMax);
    case Method::kRoySum:
      return SelectRoy(pool, config.budget, Aggregator::kSum);
    case Method::kBrustSum:
      return SelectBrust(pool, config.budget, Aggregator::kSum);
    case Method::kBrustAvg:
      return SelectBrust(pool, config.budget, Aggregator::kAvg);
    case Method::kBrustMax:
      return SelectBrust(pool, config.budget, Aggregator::kMax);
  }
  ThrowInvalidInput("unknown selection method");
}

}  // namespace alsel
