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

#ifndef ALSEL_CORE_MODEL_H_
#define ALSEL_CORE_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace alsel {

enum class ErrorCode {
  kInvalidInput,
  kEmptyPool,
  kFormat,
  kMissingData,
  kIo,
};

// Every failure raised by the library carries one of the codes above. The CLI
// maps kIo and kMissingData to exit code 1 and everything else to 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void ThrowInvalidInput(const std::string& message);
[[noreturn]] void ThrowEmptyPool(const std::string& message);
[[noreturn]] void ThrowFormat(const std::string& message);
[[noreturn]] void ThrowMissingData(const std::string& message);
[[noreturn]] void ThrowIo(const std::string& message);

// Axis-aligned box in pixels: top-left corner plus extent.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  bool operator==(const BoundingBox&) const = default;
};

// One detector output. `probs`, when present, is the per-class distribution
// the detector produced for this box; selectors that need it fail fast when
// it is missing.
struct Detection {
  BoundingBox bbox;
  double score = 0.0;
  int class_id = 0;
  std::optional<std::vector<double>> probs;

  bool operator==(const Detection&) const = default;
};

enum class LabelStatus { kUnlabelled, kLabelled };

struct ImageRecord {
  std::string image_id;
  std::vector<Detection> detections;
  std::size_t embedding_index = 0;
  LabelStatus status = LabelStatus::kUnlabelled;

  bool labelled() const { return status == LabelStatus::kLabelled; }
  bool operator==(const ImageRecord&) const = default;
};

// Dense row-major matrix of 32-bit image embeddings. Values are checked for
// finiteness on construction.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t dim, std::vector<float> values);

  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::span<const float> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<const float> values() const { return values_; }

  bool operator==(const EmbeddingMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<float> values_;
};

struct Pool {
  std::vector<ImageRecord> images;
  EmbeddingMatrix embeddings;
  int num_classes = 1;

  std::size_t CountUnlabelled() const;
  std::vector<std::size_t> UnlabelledIndices() const;
  std::vector<std::size_t> LabelledIndices() const;
  std::vector<std::string> LabelledIds() const;

  bool operator==(const Pool&) const = default;
};

// Returns one human-readable line per violated invariant; empty when the
// detection is well formed. `where` prefixes each message.
std::vector<std::string> ValidateDetection(const Detection& detection,
                                           int num_classes,
                                           std::string_view where);

// Returns an empty list iff every domain invariant holds for `pool`.
std::vector<std::string> ValidatePool(const Pool& pool);

// Deterministic 64-bit seed for an independent random stream derived from
// `base`.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream);

// Index of the largest entry; ties resolve to the lowest index.
std::size_t ArgMax(std::span<const double> values);

// Diversity weight of the blended sampling score. Always within [0, 1].
struct AlphaState {
  double value = 0.5;
  int iteration = 0;

  bool operator==(const AlphaState&) const = default;
};

enum class Method {
  kMethod1,
  kMethod2,
  kRandom,
  kUncertainty,
  kRoyMin,
  kRoyMax,
  kRoySum,
  kBrustSum,
  kBrustAvg,
  kBrustMax,
};

std::span<const Method> AllMethods();
std::string_view MethodName(Method method);
std::optional<Method> ParseMethod(std::string_view name);
// "method1|method2|random|..." for usage messages.
std::string MethodList();

// Per-pick audit. `uncertainty` is the per-image score the selector ranked on
// (u for the core methods, the aggregated entropy or margin for baselines).
// `score` is the criterion value the pick maximized, `diversity` the raw mean
// embedding distance when it was computed, and `cluster` the K-means cluster
// the pick represents.
struct PickAudit {
  std::string image_id;
  std::optional<double> uncertainty;
  std::optional<double> diversity;
  std::optional<double> score;
  std::optional<int> cluster;

  bool operator==(const PickAudit&) const = default;
};

struct SelectionResult {
  Method method = Method::kRandom;
  int iteration = 0;
  std::vector<std::string> selected;
  std::vector<PickAudit> audit;
  std::optional<double> alpha_used;

  bool operator==(const SelectionResult&) const = default;
};

}  // namespace alsel

#endif  // ALSEL_CORE_MODEL_H_
