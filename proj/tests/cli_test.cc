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

#include "alsel/cli.h"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "oracles.h"

namespace alsel {
namespace {

using testing::TempDir;

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult RunAlsel(std::vector<std::string> args) {
  args.insert(args.begin(), "alsel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// A 30-image pool on disk with 5 labelled images. Image 7 has no detections.
struct PoolFiles {
  TempDir dir;
  std::filesystem::path emb, ids, det, lab;

  PoolFiles() : emb(dir / "e.bin"), ids(dir / "e.ids"), det(dir / "d.jsonl"), lab(dir / "l.txt") {
    std::mt19937_64 rng(17);
    const std::size_t n = 30, d = 6;
    auto rows = testing::RandomRows(n, d, rng);
    std::vector<float> flat;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
      flat.insert(flat.end(), rows[i].begin(), rows[i].end());
      names.push_back(testing::TestId(i));
    }
    WriteEmbeddings(EmbeddingMatrix(d, flat), names, emb, ids);
    DetectionMap m;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == 7) continue;
      std::vector<Detection> dets(1 + i % 3);
      for (Detection& x : dets) {
        x.bbox = {0, 0, 10, 10};
        x.score = unit(rng);
        const double q = unit(rng);
        x.probs = std::vector<double>{q, 1.0 - q};
        x.class_id = q >= 0.5 ? 0 : 1;
      }
      m[names[i]] = dets;
    }
    WriteDetections(m, det);
    std::ofstream(lab) << "img00000\nimg00003\nimg00010\nimg00011\nimg00029\n";
  }

  std::vector<std::string> Select(const std::string& method, int budget,
                                  const std::filesystem::path& out) const {
    return {"select", "--method", method, "--detections", det.string(), "--embeddings",
            emb.string(), "--ids", ids.string(), "--labelled", lab.string(), "--budget",
            std::to_string(budget), "--seed", "9", "--out", out.string()};
  }
};

TEST(AlphaScheduleCliTest, SixStepsFromTheReferenceSetting) {
  CliResult r = RunAlsel({"alpha-schedule", "--alpha0", "0.5", "--budget", "1712", "--pool-size",
                     "24344", "--seed-size", "0", "--iterations", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::vector<AlphaStep> steps;
  AlphaStep s;
  while (lines >> s.step >> s.n_unlabelled >> s.alpha) steps.push_back(s);
  ASSERT_EQ(steps.size(), 6u);
  EXPECT_EQ(steps[0].n_unlabelled, 24344);
  EXPECT_EQ(steps[0].alpha, 0.5 - 1712.0 / (2.0 * 24344.0));
  double prev = 0.5;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    EXPECT_EQ(steps[k].step, static_cast<int>(k + 1));
    EXPECT_EQ(steps[k].n_unlabelled, 24344 - 1712 * static_cast<std::int64_t>(k));
    EXPECT_LE(steps[k].alpha, prev);
    EXPECT_GE(steps[k].alpha, 0.0);
    prev = steps[k].alpha;
  }
}

TEST(AlphaScheduleCliTest, InvalidArguments) {
  EXPECT_EQ(RunAlsel({"alpha-schedule", "--alpha0", "1.5", "--budget", "1", "--pool-size", "10",
                 "--seed-size", "0", "--iterations", "1"})
                .code,
            kExitInvalid);
  EXPECT_EQ(RunAlsel({"alpha-schedule", "--alpha0", "0.5", "--budget", "1", "--pool-size", "10",
                 "--seed-size", "11", "--iterations", "1"})
                .code,
            kExitInvalid);
}

TEST(AlphaScheduleTest, StopsWhenPoolExhausted) {
  auto s = AlphaSchedule(0.5, 4, 10, 2, 9);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].n_unlabelled, 8);
  EXPECT_EQ(s[1].n_unlabelled, 4);
  EXPECT_EQ(s[1].alpha, 0.0);
}

TEST(FormatDoubleTest, ShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(FormatDouble(0.5), "0.5");
  const double x = 0.5 - 1712.0 / 48688.0;
  EXPECT_EQ(std::stod(FormatDouble(x)), x);
}

TEST(SelectCliTest, WritesValidDeterministicSelection) {
  PoolFiles pool;
  for (const char* method : {"method1", "method2", "random", "uncert", "roy-min", "roy-max",
                             "roy-sum", "brust-sum", "brust-avg", "brust-max"}) {
    CliResult a = RunAlsel(pool.Select(method, 4, pool.dir / "a.json"));
    ASSERT_EQ(a.code, 0) << method << ": " << a.err;
    CliResult b = RunAlsel(pool.Select(method, 4, pool.dir / "b.json"));
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(Slurp(pool.dir / "a.json"), Slurp(pool.dir / "b.json")) << method;
    SelectionResult s = ReadSelection(pool.dir / "a.json");
    EXPECT_EQ(s.selected.size(), 4u);
    for (const auto& id : s.selected) {
      EXPECT_NE(id, "img00000");
      EXPECT_NE(id, "img00029");
    }
  }
}

TEST(SelectCliTest, UnknownMethodListsValidOnes) {
  PoolFiles pool;
  CliResult r = RunAlsel(pool.Select("coreset", 4, pool.dir / "a.json"));
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("unknown method 'coreset'"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find(MethodList()), std::string::npos) << r.err;
}

TEST(SelectCliTest, OversizedBudgetWarnsAndTakesEverything) {
  PoolFiles pool;
  CliResult r = RunAlsel(pool.Select("method2", 100, pool.dir / "a.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_EQ(ReadSelection(pool.dir / "a.json").selected.size(), 25u);
}

TEST(SelectCliTest, ErrorExitCodes) {
  PoolFiles pool;
  auto args = pool.Select("method2", 4, pool.dir / "a.json");
  args[4] = (pool.dir / "missing.jsonl").string();
  CliResult missing = RunAlsel(args);
  EXPECT_EQ(missing.code, kExitIo);
  EXPECT_NE(missing.err.find("missing.jsonl"), std::string::npos);

  args = pool.Select("method2", 4, pool.dir / "a.json");
  args.push_back("--bogus");
  EXPECT_EQ(RunAlsel(args).code, kExitInvalid);

  args = pool.Select("method2", 0, pool.dir / "a.json");
  EXPECT_EQ(RunAlsel(args).code, kExitInvalid);

  std::ofstream(pool.dir / "bad.jsonl") << "{\"image_id\": \"img00001\", \"detections\": "
                                           "[{\"bbox\": [0,0,1,1], \"score\": 2, \"class_id\": 0}]}\n";
  args = pool.Select("method2", 4, pool.dir / "a.json");
  args[4] = (pool.dir / "bad.jsonl").string();
  CliResult bad = RunAlsel(args);
  EXPECT_EQ(bad.code, kExitInvalid);
  EXPECT_NE(bad.err.find("line 1"), std::string::npos) << bad.err;

  std::ofstream(pool.dir / "stranger.jsonl") << "{\"image_id\": \"nobody\", \"detections\": []}\n";
  args[4] = (pool.dir / "stranger.jsonl").string();
  EXPECT_EQ(RunAlsel(args).code, kExitInvalid);

  EXPECT_EQ(RunAlsel({"--help"}).code, kExitOk);
  EXPECT_EQ(RunAlsel({}).code, kExitInvalid);
}

TEST(SelectCliTest, FullyLabelledPoolIsAnError) {
  PoolFiles pool;
  std::ofstream all(pool.lab);
  for (std::size_t i = 0; i < 30; ++i) all << testing::TestId(i) << "\n";
  all.close();
  EXPECT_EQ(RunAlsel(pool.Select("random", 2, pool.dir / "a.json")).code, kExitInvalid);
}

TEST(SimulateCliTest, ByteIdenticalReports) {
  TempDir dir;
  std::ofstream(dir / "c.json") << R"({"loop": {"method": "method2", "seed": 4, "num_iterations": 3},
    "pool": {"num_cameras": 4, "images_per_camera": 40, "embedding_dim": 16,
             "probe_images_per_camera": 10}})";
  CliResult a = RunAlsel({"simulate", "--config", (dir / "c.json").string(), "--out",
                     (dir / "a.json").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  CliResult b = RunAlsel({"simulate", "--config", (dir / "c.json").string(), "--out",
                     (dir / "b.json").string()});
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(Slurp(dir / "a.json"), Slurp(dir / "b.json"));
  EXPECT_EQ(a.out, b.out);
  RunReport r = ReadReport(dir / "a.json");
  EXPECT_EQ(r.iterations.size(), 4u);
  EXPECT_EQ(r.pool_size, 160u);

  ASSERT_EQ(RunAlsel({"simulate", "--config", (dir / "c.json").string(), "--out",
                 (dir / "t.json").string(), "--timings"})
                .code,
            0);
  EXPECT_NE(Slurp(dir / "t.json").find("wall_seconds"), std::string::npos);

  std::ofstream(dir / "bad.json") << R"({"loop": {"methd": "method2"}})";
  CliResult bad = RunAlsel({"simulate", "--config", (dir / "bad.json").string(), "--out",
                       (dir / "x.json").string()});
  EXPECT_EQ(bad.code, kExitInvalid);
  EXPECT_NE(bad.err.find("methd"), std::string::npos);
}

TEST(StatsCliTest, SummarizesPool) {
  PoolFiles pool;
  CliResult r = RunAlsel({"stats", "--detections", pool.det.string(), "--embeddings",
                     pool.emb.string(), "--ids", pool.ids.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["images"], 30);
  EXPECT_EQ(j["images_without_detections"], 1);
  EXPECT_EQ(j["embedding_dim"], 6);
  EXPECT_EQ(j["num_classes"], 2);
  EXPECT_EQ(j["distance_sample"], 30);
  EXPECT_GT(j["mean_pairwise_distance"].get<double>(), 0.0);
  const double mean_u = j["mean_u"].get<double>();
  EXPECT_GE(mean_u, 0.0);
  EXPECT_LE(mean_u, 1.0);
}

}  // namespace
}  // namespace alsel
