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

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>

namespace alsel {

void ThrowInvalidInput(const std::string& message) {
  throw Error(ErrorCode::kInvalidInput, message);
}
void ThrowEmptyPool(const std::string& message) {
  throw Error(ErrorCode::kEmptyPool, message);
}
void ThrowFormat(const std::string& message) {
  throw Error(ErrorCode::kFormat, message);
}
void ThrowMissingData(const std::string& message) {
  throw Error(ErrorCode::kMissingData, message);
}
void ThrowIo(const std::string& message) {
  throw Error(ErrorCode::kIo, message);
}

EmbeddingMatrix::EmbeddingMatrix(std::size_t dim, std::vector<float> values)
    : dim_(dim), values_(std::move(values)) {
  if (dim_ == 0) ThrowInvalidInput("embedding dimension must be positive");
  if (values_.size() % dim_ != 0) {
    ThrowInvalidInput("embedding buffer of " + std::to_string(values_.size()) +
                      " values is not a multiple of dim " +
                      std::to_string(dim_));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      ThrowInvalidInput("non-finite embedding value at row " +
                        std::to_string(i / dim_) + ", column " +
                        std::to_string(i % dim_));
    }
  }
}

std::size_t Pool::CountUnlabelled() const {
  return static_cast<std::size_t>(
      std::count_if(images.begin(), images.end(),
                    [](const ImageRecord& r) { return !r.labelled(); }));
}

std::vector<std::size_t> Pool::UnlabelledIndices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!images[i].labelled()) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> Pool::LabelledIndices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].labelled()) out.push_back(i);
  }
  return out;
}

std::vector<std::string> Pool::LabelledIds() const {
  std::vector<std::string> out;
  for (const ImageRecord& r : images) {
    if (r.labelled()) out.push_back(r.image_id);
  }
  return out;
}

std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(base),
                    static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::size_t ArgMax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::vector<std::string> ValidateDetection(const Detection& d, int num_classes,
                                           std::string_view where) {
  std::vector<std::string> out;
  auto add = [&](const std::string& what) {
    out.push_back(std::string(where) + ": " + what);
  };
  const BoundingBox& b = d.bbox;
  if (!std::isfinite(b.x) || !std::isfinite(b.y) || !std::isfinite(b.width) ||
      !std::isfinite(b.height)) {
    add("bbox has a non-finite coordinate");
  }
  if (b.width < 0.0 || b.height < 0.0) add("bbox has negative width/height");
  if (!(d.score >= 0.0 && d.score <= 1.0)) {
    std::ostringstream os;
    os << "score " << d.score << " outside [0,1]";
    add(os.str());
  }
  if (d.class_id < 0 || (num_classes > 0 && d.class_id >= num_classes)) {
    add("class_id " + std::to_string(d.class_id) + " outside [0," +
        std::to_string(num_classes) + ")");
  }
  if (d.probs) {
    const std::vector<double>& p = *d.probs;
    if (num_classes > 0 && p.size() != static_cast<std::size_t>(num_classes)) {
      add("probs has " + std::to_string(p.size()) + " entries, expected " +
          std::to_string(num_classes));
    }
    double sum = 0.0;
    bool in_range = true;
    for (double v : p) {
      if (!(v >= 0.0 && v <= 1.0)) in_range = false;
      sum += v;
    }
    if (!in_range) add("probs has an entry outside [0,1]");
    if (p.empty() || std::abs(sum - 1.0) > 1e-6) {
      std::ostringstream os;
      os.precision(17);
      os << "probs sum to " << sum << ", expected 1";
      add(os.str());
    }
    if (!p.empty() && d.class_id >= 0 &&
        static_cast<std::size_t>(d.class_id) < p.size() &&
        p[static_cast<std::size_t>(d.class_id)] < p[ArgMax(p)]) {
      add("class_id " + std::to_string(d.class_id) +
          " is not the argmax of probs");
    }
  }
  return out;
}

std::vector<std::string> ValidatePool(const Pool& pool) {
  std::vector<std::string> out;
  if (pool.num_classes < 1) {
    out.push_back("num_classes " + std::to_string(pool.num_classes) +
                  " must be positive");
  }
  if (!pool.images.empty() && pool.embeddings.dim() == 0) {
    out.push_back("embedding matrix has dimension 0");
  }
  std::unordered_map<std::string_view, std::size_t> seen;
  for (std::size_t i = 0; i < pool.images.size(); ++i) {
    const ImageRecord& r = pool.images[i];
    const std::string name = "image '" + r.image_id + "'";
    if (r.image_id.empty()) out.push_back("image #" + std::to_string(i) +
                                          " has an empty image_id");
    auto [it, inserted] = seen.emplace(r.image_id, i);
    if (!inserted) {
      out.push_back("duplicate image_id '" + r.image_id + "' at images #" +
                    std::to_string(it->second) + " and #" + std::to_string(i));
    }
    if (r.embedding_index >= pool.embeddings.rows()) {
      out.push_back(name + ": embedding_index " +
                    std::to_string(r.embedding_index) + " out of range (" +
                    std::to_string(pool.embeddings.rows()) + " rows)");
    }
    for (std::size_t j = 0; j < r.detections.size(); ++j) {
      auto v = ValidateDetection(r.detections[j], pool.num_classes,
                                 name + " detection #" + std::to_string(j));
      out.insert(out.end(), v.begin(), v.end());
    }
  }
  return out;
}

namespace {

struct MethodEntry {
  Method method;
  std::string_view name;
};

constexpr std::array<MethodEntry, 10> kMethods = {{
    {Method::kMethod1, "method1"},
    {Method::kMethod2, "method2"},
    {Method::kRandom, "random"},
    {Method::kUncertainty, "uncert"},
    {Method::kRoyMin, "roy-min"},
    {Method::kRoyMax, "roy-max"},
    {Method::kRoySum, "roy-sum"},
    {Method::kBrustSum, "brust-sum"},
    {Method::kBrustAvg, "brust-avg"},
    {Method::kBrustMax, "brust-max"},
}};

constexpr std::array<Method, 10> kMethodValues = {
    Method::kMethod1,  Method::kMethod2,  Method::kRandom, Method::kUncertainty,
    Method::kRoyMin,   Method::kRoyMax,   Method::kRoySum, Method::kBrustSum,
    Method::kBrustAvg, Method::kBrustMax,
};

}  // namespace

std::span<const Method> AllMethods() { return kMethodValues; }

std::string_view MethodName(Method method) {
  for (const MethodEntry& e : kMethods) {
    if (e.method == method) return e.name;
  }
  return "unknown";
}

std::optional<Method> ParseMethod(std::string_view name) {
  for (const MethodEntry& e : kMethods) {
    if (e.name == name) return e.method;
  }
  return std::nullopt;
}

std::string MethodList() {
  std::string out;
  for (const MethodEntry& e : kMethods) {
    if (!out.empty()) out += '|';
    out += e.name;
  }
  return out;
}

}  // namespace alsel
