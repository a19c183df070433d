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

// File formats.
//
//   Embeddings (EMB1): "EMB1", u32 version = 1, u32 N, u32 D, then N*D IEEE
//   float32 values, all little-endian, row-major. Ids live in a sidecar text
//   file, one per line, LF-terminated, in row order.
//
//   Detections: JSON lines, one image per line:
//     {"image_id": "...", "detections": [{"bbox": [x, y, w, h],
//      "score": s, "class_id": k, "probs": [...]}]}
//
//   Selections, reports and simulation configs are single JSON documents
//   with keys in sorted order.

#ifndef ALSEL_IO_H_
#define ALSEL_IO_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "alsel/core_model.h"
#include "alsel/loop_sim.h"
#include "alsel/synthetic.h"
#include "json.hpp"

namespace alsel {

inline constexpr char kEmbeddingMagic[4] = {'E', 'M', 'B', '1'};
inline constexpr std::uint32_t kEmbeddingVersion = 1;
inline constexpr std::size_t kEmbeddingHeaderBytes = 16;

struct EmbeddingFile {
  EmbeddingMatrix matrix;
  std::vector<std::string> ids;
};

void WriteEmbeddings(const EmbeddingMatrix& matrix,
                     std::span<const std::string> ids,
                     const std::filesystem::path& path,
                     const std::filesystem::path& ids_path);
// `dim` is taken from the header even when N = 0.
EmbeddingFile ReadEmbeddings(const std::filesystem::path& path,
                             const std::filesystem::path& ids_path);

std::vector<std::string> ReadIdList(const std::filesystem::path& path);
void WriteIdList(std::span<const std::string> ids,
                 const std::filesystem::path& path);

using DetectionMap = std::map<std::string, std::vector<Detection>>;

// `num_classes` bounds class_id and fixes the probs length; 0 leaves both
// unchecked beyond non-negativity.
DetectionMap ReadDetections(const std::filesystem::path& path,
                            int num_classes = 0);
void WriteDetections(const DetectionMap& detections,
                     const std::filesystem::path& path);

nlohmann::json DetectionToJson(const Detection& detection);
Detection DetectionFromJson(const nlohmann::json& j);

nlohmann::json SelectionToJson(const SelectionResult& result);
SelectionResult SelectionFromJson(const nlohmann::json& j);
void WriteSelection(const SelectionResult& result,
                    const std::filesystem::path& path);
SelectionResult ReadSelection(const std::filesystem::path& path);

// Wall-clock timings are only written when `include_timing` is set, so that
// default reports are byte-identical across runs.
nlohmann::json ReportToJson(const RunReport& report, bool include_timing);
RunReport ReportFromJson(const nlohmann::json& j);
void WriteReport(const RunReport& report, const std::filesystem::path& path,
                 bool include_timing = false);
RunReport ReadReport(const std::filesystem::path& path);

struct SimulationConfig {
  LoopConfig loop;
  SyntheticPoolParams pool;
  std::uint64_t pool_seed = 0;
  std::uint64_t detector_seed = 0;
};

// {"loop": {...}, "pool": {...}, "pool_seed": n, "detector_seed": n}. Every
// key is optional and falls back to the defaults; unknown keys are errors.
SimulationConfig SimulationConfigFromJson(const nlohmann::json& j);
nlohmann::json SimulationConfigToJson(const SimulationConfig& config);
SimulationConfig ReadSimulationConfig(const std::filesystem::path& path);

// Serialized document text: 2-space indent plus trailing newline.
std::string DumpDocument(const nlohmann::json& j);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace alsel

#endif  // ALSEL_IO_H_
