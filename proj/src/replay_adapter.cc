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

#include "alsel/replay_adapter.h"

#include <utility>

namespace alsel {

ReplayAdapter::ReplayAdapter(std::filesystem::path directory, int num_classes)
    : directory_(std::move(directory)), num_classes_(num_classes) {}

std::filesystem::path ReplayAdapter::FileFor(
    const std::filesystem::path& directory, int iteration) {
  return directory / ("iteration_" + std::to_string(iteration) + ".jsonl");
}

const DetectionMap& ReplayAdapter::Load(int iteration) {
  if (auto it = cache_.find(iteration); it != cache_.end()) return it->second;
  const std::filesystem::path path = FileFor(directory_, iteration);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    ThrowMissingData("replay: no detections for iteration " +
                     std::to_string(iteration) + " (expected '" +
                     path.string() + "')");
  }
  return cache_.emplace(iteration, ReadDetections(path, num_classes_))
      .first->second;
}

void ReplayAdapter::NotifyTrained(std::span<const std::string> /*labelled*/) {
  // Fail here rather than on the first Infer so the error names the round.
  Load(cursor_ + 1);
  ++cursor_;
  // Only the current round is ever served again.
  std::erase_if(cache_, [&](const auto& e) { return e.first != cursor_; });
}

std::vector<Detection> ReplayAdapter::Infer(
    std::span<const std::string> /*labelled*/, std::string_view image_id) {
  const DetectionMap& dets = Load(cursor_);
  auto it = dets.find(std::string(image_id));
  if (it == dets.end()) return {};
  return it->second;
}

}  // namespace alsel
