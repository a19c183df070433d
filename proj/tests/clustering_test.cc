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

#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "oracles.h"

namespace alsel {
namespace {

struct Instance {
  std::vector<std::vector<float>> rows;
  EmbeddingMatrix matrix;
  std::vector<std::size_t> all;
};

Instance Make(std::vector<std::vector<float>> rows) {
  Instance in;
  in.matrix = testing::MakePool(rows).embeddings;
  in.rows = std::move(rows);
  in.all.resize(in.rows.size());
  std::iota(in.all.begin(), in.all.end(), 0);
  return in;
}

void ExpectValidPartition(const Partition& p, std::size_t n, std::size_t k) {
  ASSERT_EQ(p.assignments.size(), n);
  ASSERT_EQ(p.k(), k);
  std::vector<int> sizes(k, 0);
  for (int a : p.assignments) {
    ASSERT_GE(a, 0);
    ASSERT_LT(a, static_cast<int>(k));
    ++sizes[a];
  }
  for (int s : sizes) EXPECT_GT(s, 0);
}

// Every point sits with its nearest returned centroid, lowest id on ties.
void ExpectNearestAssignment(const Instance& in, const Partition& p) {
  for (std::size_t i = 0; i < in.rows.size(); ++i) {
    auto dist = [&](int c) {
      long double s = 0.0L;
      for (std::size_t t = 0; t < in.rows[i].size(); ++t) {
        const long double d = in.rows[i][t] - p.centroids[c][t];
        s += d * d;
      }
      return s;
    };
    const int own = p.assignments[i];
    const long double own_d = dist(own);
    for (int c = 0; c < static_cast<int>(p.k()); ++c) {
      const long double d = dist(c);
      EXPECT_LE(own_d, d * (1 + 1e-12L) + 1e-18L) << "point " << i;
      if (c < own) {
        EXPECT_GT(d, own_d * (1 - 1e-15L)) << "tie not broken low";
      }
    }
  }
}

TEST(KMeansTest, SingletonClustersWhenKEqualsN) {
  std::mt19937_64 rng(1);
  Instance in = Make(testing::RandomRows(12, 5, rng));
  Partition p = KMeans(in.matrix, in.all, {.k = 12, .seed = 3});
  ExpectValidPartition(p, 12, 12);
  EXPECT_EQ(p.objective, 0.0);
}

TEST(KMeansTest, SingleClusterIsTheMean) {
  std::mt19937_64 rng(2);
  Instance in = Make(testing::RandomRows(30, 6, rng));
  Partition p = KMeans(in.matrix, in.all, {.k = 1, .seed = 3});
  ExpectValidPartition(p, 30, 1);
  for (std::size_t t = 0; t < 6; ++t) {
    long double mean = 0.0L;
    for (const auto& r : in.rows) mean += r[t];
    mean /= 30;
    EXPECT_NEAR(p.centroids[0][t], static_cast<double>(mean), 1e-12);
  }
  EXPECT_NEAR(p.objective, static_cast<double>(testing::OracleObjective(
                               in.rows, p.assignments, 1)),
              1e-9 * p.objective);
}

TEST(KMeansTest, TwoBlobsMatchExhaustiveSearch) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> jitter(-0.6, 0.6);
  std::vector<std::vector<float>> rows;
  for (int b = 0; b < 2; ++b) {
    for (int i = 0; i < 10; ++i) {
      rows.push_back({static_cast<float>(100 * b + jitter(rng)),
                      static_cast<float>(100 * b + jitter(rng))});
    }
  }
  Instance in = Make(rows);
  const std::vector<int> best = testing::OracleBestTwoPartition(rows);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(best[i], i < 10 ? 0 : 1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Partition p = KMeans(in.matrix, in.all, {.k = 2, .seed = seed});
    for (int i = 0; i < 20; ++i) {
      EXPECT_EQ(p.assignments[i] == p.assignments[0], best[i] == best[0]);
    }
  }
}

TEST(KMeansTest, ObjectiveNonIncreasingAndAssignmentsNearest) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 10 + trial * 3;
    const std::size_t dim = 1 + trial % 9;
    Instance in = Make(testing::RandomRows(n, dim, rng));
    const std::size_t k = 1 + trial % 7;
    Partition p = KMeans(in.matrix, in.all, {.k = k, .seed = static_cast<std::uint64_t>(trial)});
    ExpectValidPartition(p, n, k);
    ASSERT_FALSE(p.objective_history.empty());
    for (std::size_t i = 1; i < p.objective_history.size(); ++i) {
      EXPECT_LE(p.objective_history[i], p.objective_history[i - 1]);
    }
    EXPECT_NEAR(p.objective,
                static_cast<double>(testing::OracleObjective(in.rows, p.assignments, k)),
                1e-9 * std::max(1.0, p.objective));
    ExpectNearestAssignment(in, p);
  }
}

TEST(KMeansTest, WorksOnSubsetOfRows) {
  std::mt19937_64 rng(6);
  Instance in = Make(testing::RandomRows(40, 3, rng));
  std::vector<std::size_t> rows = {3, 9, 10, 11, 20, 21, 39};
  Partition p = KMeans(in.matrix, rows, {.k = 3, .seed = 1});
  ExpectValidPartition(p, rows.size(), 3);
}

TEST(KMeansTest, DeterministicGivenSeed) {
  std::mt19937_64 rng(7);
  Instance in = Make(testing::RandomRows(200, 16, rng));
  Partition a = KMeans(in.matrix, in.all, {.k = 9, .seed = 42});
  Partition b = KMeans(in.matrix, in.all, {.k = 9, .seed = 42});
  EXPECT_EQ(a.assignments, b.assignments);
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_EQ(a.objective_history, b.objective_history);
}

TEST(KMeansTest, DuplicatePointsStillGiveKNonEmptyClusters) {
  std::vector<std::vector<float>> rows(15, {1.0f, 2.0f});
  Instance in = Make(rows);
  Partition p = KMeans(in.matrix, in.all, {.k = 4, .seed = 0});
  ExpectValidPartition(p, 15, 4);
  EXPECT_EQ(p.objective, 0.0);

  std::vector<std::vector<float>> three;
  for (int i = 0; i < 12; ++i) three.push_back({static_cast<float>(i % 3), 0.0f});
  Instance t = Make(three);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Partition q = KMeans(t.matrix, t.all, {.k = 3, .seed = seed});
    ExpectValidPartition(q, 12, 3);
    EXPECT_EQ(q.objective, 0.0);
  }
}

TEST(KMeansTest, RejectsBadK) {
  std::mt19937_64 rng(8);
  Instance in = Make(testing::RandomRows(5, 2, rng));
  EXPECT_THROW(KMeans(in.matrix, in.all, {.k = 0}), Error);
  EXPECT_THROW(KMeans(in.matrix, in.all, {.k = 6}), Error);
  EXPECT_THROW(KMeansPlusPlusInit(in.matrix, in.all, 6, 0), Error);
}

TEST(KMeansPlusPlusTest, KEqualsNPicksEveryPointOnce) {
  std::mt19937_64 rng(9);
  Instance in = Make(testing::RandomRows(25, 4, rng));
  auto picks = KMeansPlusPlusInit(in.matrix, in.all, 25, 5);
  std::set<std::size_t> distinct(picks.begin(), picks.end());
  EXPECT_EQ(distinct.size(), 25u);
  EXPECT_EQ(picks, KMeansPlusPlusInit(in.matrix, in.all, 25, 5));
}

TEST(KMeansPlusPlusTest, RepeatedPoint) {
  Instance in = Make(std::vector<std::vector<float>>(6, {4.0f, 5.0f}));
  auto picks = KMeansPlusPlusInit(in.matrix, in.all, 1, 0);
  ASSERT_EQ(picks.size(), 1u);
  EXPECT_EQ(in.rows[picks[0]], (std::vector<float>{4.0f, 5.0f}));
}

TEST(KMeansTest, HighDimensionalClustersRecovered) {
  // Well separated clusters in D = 512 exercise the blocked distance path.
  std::mt19937_64 rng(10);
  const std::size_t dim = 512, per = 60, k = 8;
  auto centers = testing::RandomRows(k, dim, rng, 10.0);
  std::normal_distribution<double> g(0.0, 0.5);
  std::vector<std::vector<float>> rows;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < per; ++i) {
      auto r = centers[c];
      for (float& v : r) v += static_cast<float>(g(rng));
      rows.push_back(std::move(r));
    }
  }
  Instance in = Make(rows);
  Partition p = KMeans(in.matrix, in.all, {.k = k, .seed = 11});
  ExpectValidPartition(p, rows.size(), k);
  ExpectNearestAssignment(in, p);
  for (std::size_t i = 1; i < p.objective_history.size(); ++i) {
    EXPECT_LE(p.objective_history[i], p.objective_history[i - 1]);
  }
}

}  // namespace
}  // namespace alsel
