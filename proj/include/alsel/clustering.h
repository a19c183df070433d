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

#ifndef ALSEL_CLUSTERING_H_
#define ALSEL_CLUSTERING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "alsel/core_model.h"

namespace alsel {

struct KMeansOptions {
  std::size_t k = 1;
  std::uint64_t seed = 0;
  int max_iters = 100;
  // Lloyd stops once no centroid moves farther than this (Euclidean).
  double tol = 1e-4;
};

// A K-way partition of the candidate rows. `assignments[i]` is the cluster of
// the i-th candidate row as passed to KMeans. `objective_history` holds the
// sum of squared distances after every Lloyd update and is non-increasing.
struct Partition {
  std::vector<int> assignments;
  std::vector<std::vector<double>> centroids;
  double objective = 0.0;
  int iterations_run = 0;
  std::vector<double> objective_history;

  std::size_t k() const { return centroids.size(); }
  // Candidate positions grouped by cluster, each group in ascending order.
  std::vector<std::vector<std::size_t>> Members() const;
};

// k-means++ seeding over `rows` of `embeddings`. Returns the chosen candidate
// positions (indices into `rows`), in pick order.
std::vector<std::size_t> KMeansPlusPlusInit(const EmbeddingMatrix& embeddings,
                                            std::span<const std::size_t> rows,
                                            std::size_t k, std::uint64_t seed);

// Lloyd iterations from k-means++ seeding. Deterministic given the inputs.
// Throws kInvalidInput unless 1 <= k <= rows.size().
Partition KMeans(const EmbeddingMatrix& embeddings,
                 std::span<const std::size_t> rows,
                 const KMeansOptions& options);

}  // namespace alsel

#endif  // ALSEL_CLUSTERING_H_
