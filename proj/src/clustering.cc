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

#include "alsel/clustering.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "alsel/scoring.h"

namespace alsel {

namespace {

using FloatRows =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr std::ptrdiff_t kBlockRows = 512;

void CheckK(std::size_t k, std::size_t n) {
  if (k == 0 || k > n) {
    ThrowInvalidInput("k-means: K = " + std::to_string(k) +
                      " must satisfy 1 <= K <= N = " + std::to_string(n));
  }
}

double SquaredDistanceToCentroid(std::span<const float> x,
                                 std::span<const double> c) {
  constexpr std::size_t kLanes = 8;
  double acc[kLanes] = {};
  const std::size_t n = x.size();
  const std::size_t blocked = n - n % kLanes;
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      const double d = static_cast<double>(x[i + l]) - c[i + l];
      acc[l] += d * d;
    }
  }
  for (std::size_t i = blocked; i < n; ++i) {
    const double d = static_cast<double>(x[i]) - c[i];
    acc[i - blocked] += d * d;
  }
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
         ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

double SquaredNorm(std::span<const double> c) {
  double s = 0.0;
  for (double v : c) s += v * v;
  return s;
}

// Candidate rows gathered into one contiguous float block.
class Workspace {
 public:
  Workspace(const EmbeddingMatrix& embeddings,
            std::span<const std::size_t> rows)
      : n_(static_cast<std::ptrdiff_t>(rows.size())),
        dim_(static_cast<std::ptrdiff_t>(embeddings.dim())),
        points_(n_, dim_),
        norms_(rows.size()) {
    for (std::ptrdiff_t i = 0; i < n_; ++i) {
      const std::size_t r = rows[static_cast<std::size_t>(i)];
      if (r >= embeddings.rows()) {
        ThrowInvalidInput("k-means: candidate row " + std::to_string(r) +
                          " out of range");
      }
      std::span<const float> src = embeddings.row(r);
      std::copy(src.begin(), src.end(), points_.row(i).data());
      double s = 0.0;
      for (float v : src) s += static_cast<double>(v) * v;
      norms_[static_cast<std::size_t>(i)] = s;
    }
  }

  std::size_t n() const { return static_cast<std::size_t>(n_); }
  std::size_t dim() const { return static_cast<std::size_t>(dim_); }
  std::span<const float> point(std::size_t i) const {
    return {points_.row(static_cast<std::ptrdiff_t>(i)).data(), dim()};
  }

  // Nearest centroid per point, ties to the lowest cluster id. The float GEMM
  // gives ‖x‖² + ‖c‖² − 2x·c with a rigorous error bound; every centroid that
  // the bound cannot rule out is rescored exactly in double.
  void Assign(const std::vector<std::vector<double>>& centroids,
              std::vector<int>& assign, std::vector<double>& d2) const {
    const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(centroids.size());
    FloatRows cf(k, dim_);
    std::vector<double> cnorm(centroids.size());
    std::vector<double> cf_norm(centroids.size());
    for (std::ptrdiff_t j = 0; j < k; ++j) {
      const auto& c = centroids[static_cast<std::size_t>(j)];
      double sf = 0.0;
      for (std::ptrdiff_t t = 0; t < dim_; ++t) {
        const float v = static_cast<float>(c[static_cast<std::size_t>(t)]);
        cf(j, t) = v;
        sf += static_cast<double>(v) * v;
      }
      cnorm[static_cast<std::size_t>(j)] = SquaredNorm(c);
      cf_norm[static_cast<std::size_t>(j)] = std::sqrt(sf);
    }
    // Worst-case relative error of a float dot product of length D plus the
    // rounding of the centroid to float.
    const double gamma =
        static_cast<double>(dim_ + 3) * std::ldexp(1.0, -24) * 1.01;
    assign.assign(n(), 0);
    d2.assign(n(), 0.0);
    const std::ptrdiff_t num_blocks = (n_ + kBlockRows - 1) / kBlockRows;

#pragma omp parallel
    {
      FloatRows dots;
      std::vector<double> approx(centroids.size());
      std::vector<double> bound(centroids.size());
#pragma omp for schedule(dynamic, 1)
      for (std::ptrdiff_t b = 0; b < num_blocks; ++b) {
        const std::ptrdiff_t begin = b * kBlockRows;
        const std::ptrdiff_t rows = std::min(kBlockRows, n_ - begin);
        dots.noalias() = points_.middleRows(begin, rows) * cf.transpose();
        for (std::ptrdiff_t r = 0; r < rows; ++r) {
          const std::size_t i = static_cast<std::size_t>(begin + r);
          const double xn = norms_[i];
          const double xlen = std::sqrt(xn);
          double upper = std::numeric_limits<double>::infinity();
          for (std::ptrdiff_t j = 0; j < k; ++j) {
            const std::size_t jj = static_cast<std::size_t>(j);
            const double a = std::max(
                0.0, xn + cnorm[jj] - 2.0 * static_cast<double>(dots(r, j)));
            const double e =
                2.0 * gamma * xlen * cf_norm[jj] + 1e-12 * (xn + cnorm[jj]);
            approx[jj] = a;
            bound[jj] = e;
            upper = std::min(upper, a + e);
          }
          int best = -1;
          double best_d2 = std::numeric_limits<double>::infinity();
          for (std::ptrdiff_t j = 0; j < k; ++j) {
            const std::size_t jj = static_cast<std::size_t>(j);
            if (approx[jj] - bound[jj] > upper) continue;
            const double exact = SquaredDistanceToCentroid(point(i), centroids[jj]);
            if (exact < best_d2) {
              best_d2 = exact;
              best = static_cast<int>(j);
            }
          }
          assign[i] = best;
          d2[i] = best_d2;
        }
      }
    }
  }

  double Objective(const std::vector<std::vector<double>>& centroids,
                   const std::vector<int>& assign) const {
    std::vector<double> d2(n());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n_; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      d2[ii] = SquaredDistanceToCentroid(
          point(ii), centroids[static_cast<std::size_t>(assign[ii])]);
    }
    double s = 0.0;
    for (double v : d2) s += v;
    return s;
  }

  std::vector<std::vector<double>> Means(
      const std::vector<int>& assign,
      const std::vector<std::vector<double>>& previous) const {
    std::vector<std::vector<double>> sums(previous.size(),
                                          std::vector<double>(dim(), 0.0));
    std::vector<std::size_t> counts(previous.size(), 0);
    for (std::size_t i = 0; i < n(); ++i) {
      std::vector<double>& s = sums[static_cast<std::size_t>(assign[i])];
      std::span<const float> x = point(i);
      for (std::size_t t = 0; t < dim(); ++t) s[t] += x[t];
      ++counts[static_cast<std::size_t>(assign[i])];
    }
    for (std::size_t j = 0; j < sums.size(); ++j) {
      if (counts[j] == 0) {
        sums[j] = previous[j];
        continue;
      }
      const double inv = 1.0 / static_cast<double>(counts[j]);
      for (double& v : sums[j]) v *= inv;
    }
    return sums;
  }

  // Gives every empty cluster the point farthest from its own centroid,
  // drawn from clusters that keep at least one member. Returns whether any
  // repair happened.
  bool RepairEmpty(std::vector<int>& assign, std::vector<double>& d2,
                   std::vector<std::vector<double>>& centroids) const {
    std::vector<std::size_t> counts(centroids.size(), 0);
    for (int a : assign) ++counts[static_cast<std::size_t>(a)];
    bool repaired = false;
    for (std::size_t e = 0; e < centroids.size(); ++e) {
      if (counts[e] != 0) continue;
      std::size_t far = n();
      for (std::size_t i = 0; i < n(); ++i) {
        if (counts[static_cast<std::size_t>(assign[i])] < 2) continue;
        if (far == n() || d2[i] > d2[far]) far = i;
      }
      if (far == n()) break;  // unreachable while K <= N
      --counts[static_cast<std::size_t>(assign[far])];
      ++counts[e];
      assign[far] = static_cast<int>(e);
      d2[far] = 0.0;
      std::span<const float> x = point(far);
      centroids[e].assign(x.begin(), x.end());
      repaired = true;
    }
    return repaired;
  }

 private:
  std::ptrdiff_t n_;
  std::ptrdiff_t dim_;
  FloatRows points_;
  std::vector<double> norms_;
};

double MaxMovement(const std::vector<std::vector<double>>& a,
                   const std::vector<std::vector<double>>& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double s = 0.0;
    for (std::size_t t = 0; t < a[j].size(); ++t) {
      const double d = a[j][t] - b[j][t];
      s += d * d;
    }
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

}  // namespace

std::vector<std::vector<std::size_t>> Partition::Members() const {
  std::vector<std::vector<std::size_t>> out(centroids.size());
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    out[static_cast<std::size_t>(assignments[i])].push_back(i);
  }
  return out;
}

std::vector<std::size_t> KMeansPlusPlusInit(const EmbeddingMatrix& embeddings,
                                            std::span<const std::size_t> rows,
                                            std::size_t k, std::uint64_t seed) {
  const std::size_t n = rows.size();
  CheckK(k, n);
  for (std::size_t r : rows) {
    if (r >= embeddings.rows()) {
      ThrowInvalidInput("k-means++: candidate row " + std::to_string(r) +
                        " out of range");
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  std::vector<char> taken(n, 0);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

  auto take = [&](std::size_t pick) {
    chosen.push_back(pick);
    taken[pick] = 1;
    std::span<const float> c = embeddings.row(rows[pick]);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      if (taken[ii]) {
        nearest[ii] = 0.0;
        continue;
      }
      nearest[ii] =
          std::min(nearest[ii], SquaredDistance(embeddings.row(rows[ii]), c));
    }
  };

  take(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  while (chosen.size() < k) {
    double total = 0.0;
    for (double w : nearest) total += w;
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = std::uniform_real_distribution<double>(0.0, total)(rng);
      double cumulative = 0.0;
      std::size_t last_positive = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (nearest[i] <= 0.0) continue;
        last_positive = i;
        cumulative += nearest[i];
        if (cumulative > target) {
          pick = i;
          break;
        }
      }
      if (pick == n) pick = last_positive;
    } else {
      // Only duplicates of chosen points remain; fall back to uniform.
      const std::size_t remaining = n - chosen.size();
      std::size_t skip =
          std::uniform_int_distribution<std::size_t>(0, remaining - 1)(rng);
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        if (skip == 0) {
          pick = i;
          break;
        }
        --skip;
      }
    }
    take(pick);
  }
  return chosen;
}

Partition KMeans(const EmbeddingMatrix& embeddings,
                 std::span<const std::size_t> rows,
                 const KMeansOptions& options) {
  CheckK(options.k, rows.size());
  if (options.max_iters < 0) ThrowInvalidInput("k-means: max_iters < 0");
  if (!(options.tol >= 0.0)) ThrowInvalidInput("k-means: tol must be >= 0");

  const Workspace ws(embeddings, rows);
  std::vector<std::vector<double>> centroids;
  centroids.reserve(options.k);
  for (std::size_t pick :
       KMeansPlusPlusInit(embeddings, rows, options.k, options.seed)) {
    std::span<const float> x = ws.point(pick);
    centroids.emplace_back(x.begin(), x.end());
  }

  Partition out;
  std::vector<int> assign;
  std::vector<double> d2;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    ws.Assign(centroids, assign, d2);
    ws.RepairEmpty(assign, d2, centroids);
    std::vector<std::vector<double>> next = ws.Means(assign, centroids);
    const double movement = MaxMovement(next, centroids);
    centroids = std::move(next);
    out.objective_history.push_back(ws.Objective(centroids, assign));
    out.iterations_run = iter + 1;
    if (movement < options.tol) break;
  }

  // Final assignment against the returned centroids. Repair can only be
  // needed when duplicate points tie between centroids.
  for (std::size_t attempt = 0; attempt <= options.k; ++attempt) {
    ws.Assign(centroids, assign, d2);
    if (!ws.RepairEmpty(assign, d2, centroids)) break;
  }
  out.objective = ws.Objective(centroids, assign);
  out.assignments = std::move(assign);
  out.centroids = std::move(centroids);
  return out;
}

}  // namespace alsel
