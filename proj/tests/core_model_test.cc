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

#include "alsel/core_model.h"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "oracles.h"

namespace alsel {
namespace {

using testing::MakePool;

Detection GoodDetection() {
  Detection d;
  d.bbox = {1, 2, 3, 4};
  d.score = 0.8;
  d.class_id = 1;
  d.probs = std::vector<double>{0.1, 0.8, 0.1};
  return d;
}

Pool ThreeImagePool() {
  Pool pool = MakePool({{0, 0}, {1, 1}, {2, 2}}, 3);
  pool.images[0].detections = {GoodDetection()};
  pool.images[1].status = LabelStatus::kLabelled;
  return pool;
}

TEST(ValidatePoolTest, WellFormedPoolHasNoViolations) {
  EXPECT_TRUE(ValidatePool(ThreeImagePool()).empty());
}

TEST(ValidatePoolTest, DuplicateIdNamed) {
  Pool pool = ThreeImagePool();
  pool.images[2].image_id = pool.images[0].image_id;
  auto v = ValidatePool(pool);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find(pool.images[0].image_id), std::string::npos);
}

TEST(ValidatePoolTest, UnnormalizedProbsNamed) {
  Pool pool = ThreeImagePool();
  pool.images[0].detections[0].probs = std::vector<double>{0.1, 0.6, 0.1};
  auto v = ValidatePool(pool);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("detection #0"), std::string::npos);
  EXPECT_NE(v[0].find(pool.images[0].image_id), std::string::npos);
}

// Each mutation breaks exactly one invariant; the validator must report it,
// and once undone the pool is clean again.
TEST(ValidatePoolTest, EveryInvariantDetectedByMutation) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<const char*, std::function<void(Pool&)>>> mutations = {
      {"empty id", [](Pool& p) { p.images[0].image_id = ""; }},
      {"duplicate id", [](Pool& p) { p.images[1].image_id = p.images[2].image_id; }},
      {"embedding index", [](Pool& p) { p.images[2].embedding_index = 3; }},
      {"score high", [](Pool& p) { p.images[0].detections[0].score = 1.3; }},
      {"score low", [](Pool& p) { p.images[0].detections[0].score = -0.01; }},
      {"score nan", [nan](Pool& p) { p.images[0].detections[0].score = nan; }},
      {"negative width", [](Pool& p) { p.images[0].detections[0].bbox.width = -1; }},
      {"negative height", [](Pool& p) { p.images[0].detections[0].bbox.height = -1; }},
      {"nan bbox", [nan](Pool& p) { p.images[0].detections[0].bbox.x = nan; }},
      {"class high", [](Pool& p) {
         p.images[0].detections[0].class_id = 3;
         p.images[0].detections[0].probs.reset();
       }},
      {"class negative", [](Pool& p) {
         p.images[0].detections[0].class_id = -1;
         p.images[0].detections[0].probs.reset();
       }},
      {"probs length", [](Pool& p) {
         p.images[0].detections[0].probs = std::vector<double>{0.2, 0.8};
       }},
      {"probs sum", [](Pool& p) {
         p.images[0].detections[0].probs = std::vector<double>{0.1, 0.6, 0.1};
       }},
      {"probs negative", [](Pool& p) {
         p.images[0].detections[0].probs = std::vector<double>{-0.1, 0.9, 0.2};
       }},
      {"argmax", [](Pool& p) { p.images[0].detections[0].class_id = 0; }},
      {"num classes", [](Pool& p) {
         p.num_classes = 0;
         p.images[0].detections.clear();
       }},
  };
  for (const auto& [name, mutate] : mutations) {
    Pool pool = ThreeImagePool();
    mutate(pool);
    EXPECT_FALSE(ValidatePool(pool).empty()) << name;
  }
}

TEST(ValidatePoolTest, ArgmaxTieAccepted) {
  Pool pool = ThreeImagePool();
  pool.images[0].detections[0].probs = std::vector<double>{0.45, 0.45, 0.1};
  pool.images[0].detections[0].class_id = 1;
  EXPECT_TRUE(ValidatePool(pool).empty());
}

TEST(ValidatePoolTest, DetectionsMayBeEmptyAndProbsOptional) {
  Pool pool = ThreeImagePool();
  pool.images[0].detections[0].probs.reset();
  pool.images[2].detections.clear();
  EXPECT_TRUE(ValidatePool(pool).empty());
}

TEST(EmbeddingMatrixTest, RejectsBadShapes) {
  EXPECT_THROW(EmbeddingMatrix(0, {}), Error);
  EXPECT_THROW(EmbeddingMatrix(3, {1, 2}), Error);
  EXPECT_THROW(EmbeddingMatrix(1, {std::numeric_limits<float>::infinity()}), Error);
  EmbeddingMatrix m(2, {1, 2, 3, 4});
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.row(1)[0], 3.0f);
  EXPECT_EQ(EmbeddingMatrix(8, {}).rows(), 0u);
}

TEST(PoolTest, LabelledAndUnlabelledPartitionThePool) {
  Pool pool = ThreeImagePool();
  EXPECT_EQ(pool.CountUnlabelled(), 2u);
  EXPECT_EQ(pool.UnlabelledIndices(), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(pool.LabelledIndices(), (std::vector<std::size_t>{1}));
  EXPECT_EQ(pool.LabelledIds(), (std::vector<std::string>{"img00001"}));
}

TEST(MethodTest, NamesRoundTrip) {
  for (Method m : AllMethods()) {
    auto parsed = ParseMethod(MethodName(m));
    ASSERT_TRUE(parsed.has_value());
    EXPECT_EQ(*parsed, m);
  }
  EXPECT_FALSE(ParseMethod("bogus").has_value());
  EXPECT_EQ(MethodList(),
            "method1|method2|random|uncert|roy-min|roy-max|roy-sum|brust-sum|"
            "brust-avg|brust-max");
}

TEST(DeriveSeedTest, DeterministicAndStreamSensitive) {
  EXPECT_EQ(DeriveSeed(1, 2), DeriveSeed(1, 2));
  EXPECT_NE(DeriveSeed(1, 2), DeriveSeed(1, 3));
  EXPECT_NE(DeriveSeed(1, 2), DeriveSeed(2, 2));
}

TEST(ArgMaxTest, LowestIndexWinsTies) {
  EXPECT_EQ(ArgMax(std::vector<double>{0.2, 0.5, 0.5}), 1u);
  EXPECT_EQ(ArgMax(std::vector<double>{1.0}), 0u);
}

}  // namespace
}  // namespace alsel
