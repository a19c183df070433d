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

#include <algorithm>
#include <charconv>
#include <optional>
#include <random>
#include <unordered_map>

#include "CLI11.hpp"
#include "alsel/parallel.h"
#include "alsel/scoring.h"
#include "alsel/selectors.h"
#include "alsel/synthetic.h"

namespace alsel {

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
    case ErrorCode::kMissingData:
      return kExitIo;
    default:
      return kExitInvalid;
  }
}

std::string FormatDouble(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

RunReport RunSimulation(const SimulationConfig& config) {
  const SyntheticPool synth = MakeSyntheticPool(config.pool, config.pool_seed);
  SyntheticDetector detector(synth, config.detector_seed);
  LoopHooks hooks;
  hooks.image_classes = synth.ImageClasses();
  hooks.quality = [&detector](std::span<const std::string> labelled) {
    return detector.QualityProxy(labelled);
  };
  return RunLoop(synth.pool, detector, config.loop, hooks);
}

std::vector<AlphaStep> AlphaSchedule(double alpha0, std::int64_t budget,
                                     std::int64_t pool_size,
                                     std::int64_t seed_size, int iterations) {
  if (!(alpha0 >= 0.0 && alpha0 <= 1.0)) {
    ThrowInvalidInput("alpha-schedule: alpha0 must lie in [0,1]");
  }
  if (budget < 1) ThrowInvalidInput("alpha-schedule: budget must be >= 1");
  if (seed_size < 0 || pool_size < seed_size) {
    ThrowInvalidInput("alpha-schedule: need 0 <= seed-size <= pool-size");
  }
  if (iterations < 0) ThrowInvalidInput("alpha-schedule: iterations must be >= 0");
  std::vector<AlphaStep> out;
  AlphaState alpha{.value = alpha0, .iteration = 0};
  std::int64_t unlabelled = pool_size - seed_size;
  for (int k = 1; k <= iterations && unlabelled > 0; ++k) {
    alpha = UpdateAlpha(alpha, budget, unlabelled);
    out.push_back({k, unlabelled, alpha.value});
    unlabelled -= std::min(budget, unlabelled);
  }
  return out;
}

namespace {

struct LoadedPool {
  Pool pool;
  std::size_t without_detections = 0;
};

// Pool from an embedding file, its id sidecar and a detections file. Images
// missing from the detections file have no detections.
LoadedPool LoadPool(const std::string& embeddings, const std::string& ids,
                    const std::string& detections) {
  EmbeddingFile emb = ReadEmbeddings(embeddings, ids);
  DetectionMap dets = ReadDetections(detections);
  LoadedPool out;
  std::unordered_map<std::string, std::size_t> index;
  int num_classes = 1;
  for (std::size_t i = 0; i < emb.ids.size(); ++i) {
    ImageRecord rec;
    rec.image_id = emb.ids[i];
    rec.embedding_index = i;
    index.emplace(rec.image_id, i);
    out.pool.images.push_back(std::move(rec));
  }
  for (auto& [id, list] : dets) {
    auto it = index.find(id);
    if (it == index.end()) {
      ThrowInvalidInput("'" + detections + "': image_id '" + id +
                        "' is not listed in '" + ids + "'");
    }
    for (const Detection& d : list) {
      num_classes = std::max(num_classes, d.class_id + 1);
      if (d.probs) num_classes = std::max(num_classes, static_cast<int>(d.probs->size()));
    }
    out.pool.images[it->second].detections = std::move(list);
  }
  for (const ImageRecord& r : out.pool.images) {
    if (!dets.count(r.image_id)) ++out.without_detections;
  }
  out.pool.num_classes = num_classes;
  out.pool.embeddings = std::move(emb.matrix);
  if (auto v = ValidatePool(out.pool); !v.empty()) {
    ThrowInvalidInput("'" + detections + "': " + v.front());
  }
  return out;
}

void MarkLabelled(Pool& pool, const std::string& path) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < pool.images.size(); ++i) {
    index.emplace(pool.images[i].image_id, i);
  }
  for (const std::string& id : ReadIdList(path)) {
    auto it = index.find(id);
    if (it == index.end()) {
      ThrowInvalidInput("'" + path + "': labelled id '" + id +
                        "' is not in the embedding ids");
    }
    pool.images[it->second].status = LabelStatus::kLabelled;
  }
}

struct SelectArgs {
  std::string method;
  std::string detections;
  std::string embeddings;
  std::string ids;
  std::string labelled;
  int budget = 0;
  std::uint64_t seed = 0;
  double alpha = 0.5;
  std::string diversity_norm = "max";
  double empty_u = 0.0;
  std::string out;
};

int RunSelect(const SelectArgs& a, std::ostream& out, std::ostream& err) {
  const std::optional<Method> method = ParseMethod(a.method);
  if (!method) {
    err << "error: unknown method '" << a.method << "'; valid methods: "
        << MethodList() << "\n";
    return kExitInvalid;
  }
  SelectorConfig config;
  config.budget = a.budget;
  config.seed = a.seed;
  config.alpha0 = a.alpha;
  config.diversity_norm = a.diversity_norm == "none" ? DiversityNorm::kNone
                                                     : DiversityNorm::kDivideByMax;
  config.empty_policy.value = a.empty_u;
  ValidateSelectorConfig(config);

  LoadedPool loaded = LoadPool(a.embeddings, a.ids, a.detections);
  Pool& pool = loaded.pool;
  MarkLabelled(pool, a.labelled);
  const std::size_t unlabelled = pool.CountUnlabelled();
  if (unlabelled == 0) ThrowEmptyPool("select: every image is already labelled");
  if (static_cast<std::size_t>(a.budget) > unlabelled) {
    err << "warning: budget " << a.budget << " exceeds the " << unlabelled
        << " unlabelled images; selecting all of them\n";
  }
  std::vector<double> u(pool.images.size(), 0.0);
  for (std::size_t i = 0; i < pool.images.size(); ++i) {
    if (!pool.images[i].labelled()) {
      u[i] = ImageUncertainty(pool.images[i].detections, config.empty_policy);
    }
  }
  SelectionResult result = Select(*method, pool, u,
                                  AlphaState{.value = a.alpha, .iteration = 0},
                                  config);
  WriteSelection(result, a.out);
  out << "selected " << result.selected.size() << " of " << unlabelled
      << " unlabelled images with " << MethodName(*method) << "\n";
  return kExitOk;
}

int RunSimulate(const std::string& config_path, const std::string& out_path,
                bool timings, std::ostream& out) {
  const SimulationConfig config = ReadSimulationConfig(config_path);
  const RunReport report = RunSimulation(config);
  WriteReport(report, out_path, timings);
  out << MethodName(report.method) << ": " << report.iterations.size() - 1
      << " rounds, " << report.final_labelled << " of " << report.pool_size
      << " labelled";
  if (report.quality_auc) out << ", quality AUC " << FormatDouble(*report.quality_auc);
  out << "\n";
  return kExitOk;
}

int RunStats(const std::string& detections, const std::string& embeddings,
             const std::string& ids, std::uint64_t seed, std::ostream& out) {
  constexpr std::size_t kMaxSample = 1000;
  const LoadedPool loaded = LoadPool(embeddings, ids, detections);
  const Pool& pool = loaded.pool;
  const std::size_t n = pool.images.size();

  std::size_t total = 0;
  double u_sum = 0.0;
  for (const ImageRecord& r : pool.images) {
    total += r.detections.size();
    u_sum += ImageUncertainty(r.detections, EmptyDetectionPolicy{});
  }

  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = pool.images[i].embedding_index;
  if (n > kMaxSample) {
    std::mt19937_64 rng(seed);
    for (std::size_t p = 0; p < kMaxSample; ++p) {
      std::uniform_int_distribution<std::size_t> pick(p, n - 1);
      std::swap(rows[p], rows[pick(rng)]);
    }
    rows.resize(kMaxSample);
    std::sort(rows.begin(), rows.end());
  }
  double dist_sum = 0.0;
  const std::size_t m = rows.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      dist_sum += EuclideanDistance(pool.embeddings.row(rows[i]),
                                    pool.embeddings.row(rows[j]));
    }
  }

  nlohmann::json j;
  j["images"] = n;
  j["images_without_detections"] = loaded.without_detections;
  j["detections"] = total;
  j["num_classes"] = pool.num_classes;
  j["embedding_dim"] = pool.embeddings.dim();
  j["mean_u"] = n ? nlohmann::json(u_sum / static_cast<double>(n)) : nlohmann::json(nullptr);
  j["distance_sample"] = m;
  j["mean_pairwise_distance"] =
      m >= 2 ? nlohmann::json(dist_sum / (0.5 * static_cast<double>(m) *
                                          static_cast<double>(m - 1)))
             : nlohmann::json(nullptr);
  j["seed"] = seed;
  out << DumpDocument(j);
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Batch active-learning selection for object detection", "alsel"};
  app.require_subcommand(1);

  SelectArgs sel;
  CLI::App* select = app.add_subcommand("select", "Select a batch from a pool");
  select->add_option("--method", sel.method, MethodList())->required();
  select->add_option("--detections", sel.detections, "Detections JSON-lines file")->required();
  select->add_option("--embeddings", sel.embeddings, "EMB1 embedding file")->required();
  select->add_option("--ids", sel.ids, "Embedding id sidecar")->required();
  select->add_option("--labelled", sel.labelled, "Labelled id list")->required();
  select->add_option("--budget", sel.budget, "Batch size")->required();
  select->add_option("--seed", sel.seed, "Random seed")->required();
  select->add_option("--alpha", sel.alpha, "Diversity weight (method2)");
  select->add_option("--diversity-norm", sel.diversity_norm, "none|max")
      ->check(CLI::IsMember({"none", "max"}));
  select->add_option("--empty-u", sel.empty_u, "Uncertainty of images without detections");
  select->add_option("--out", sel.out, "Selection output file")->required();

  std::string config_path, report_path;
  bool timings = false;
  CLI::App* simulate = app.add_subcommand("simulate", "Run the synthetic loop");
  simulate->add_option("--config", config_path, "Simulation config")->required();
  simulate->add_option("--out", report_path, "Report output file")->required();
  simulate->add_flag("--timings", timings, "Include wall-clock times in the report");

  double alpha0 = 0.5;
  std::int64_t budget = 0, pool_size = 0, seed_size = 0;
  int iterations = 0;
  CLI::App* schedule = app.add_subcommand("alpha-schedule", "Print the alpha sequence");
  schedule->add_option("--alpha0", alpha0, "Initial alpha")->required();
  schedule->add_option("--budget", budget, "Batch size")->required();
  schedule->add_option("--pool-size", pool_size, "Total pool size")->required();
  schedule->add_option("--seed-size", seed_size, "Initially labelled images")->required();
  schedule->add_option("--iterations", iterations, "Number of batches")->required();

  std::string st_detections, st_embeddings, st_ids;
  std::uint64_t st_seed = 0;
  CLI::App* stats = app.add_subcommand("stats", "Summarize a pool");
  stats->add_option("--detections", st_detections, "Detections JSON-lines file")->required();
  stats->add_option("--embeddings", st_embeddings, "EMB1 embedding file")->required();
  stats->add_option("--ids", st_ids, "Embedding id sidecar")->required();
  stats->add_option("--seed", st_seed, "Subsample seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    ConfigureThreadsFromEnv();
    if (*select) return RunSelect(sel, out, err);
    if (*simulate) return RunSimulate(config_path, report_path, timings, out);
    if (*schedule) {
      for (const AlphaStep& s :
           AlphaSchedule(alpha0, budget, pool_size, seed_size, iterations)) {
        out << s.step << ' ' << s.n_unlabelled << ' ' << FormatDouble(s.alpha) << "\n";
      }
      return kExitOk;
    }
    if (*stats) return RunStats(st_detections, st_embeddings, st_ids, st_seed, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitInvalid;
}

}  // namespace alsel
