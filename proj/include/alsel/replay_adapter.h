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

#ifndef ALSEL_REPLAY_ADAPTER_H_
#define ALSEL_REPLAY_ADAPTER_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alsel/io.h"
#include "alsel/loop_sim.h"

namespace alsel {

// Serves precomputed detector outputs. The directory holds one detections
// file per round, `iteration_<k>.jsonl`; the k-th NotifyTrained call moves the
// cursor to k and Infer then answers from that file. Images absent from the
// file get no detections.
class ReplayAdapter : public DetectorAdapter {
 public:
  explicit ReplayAdapter(std::filesystem::path directory, int num_classes = 0);

  static std::filesystem::path FileFor(const std::filesystem::path& directory,
                                       int iteration);

  int cursor() const { return cursor_; }

  void NotifyTrained(std::span<const std::string> labelled) override;
  std::vector<Detection> Infer(std::span<const std::string> labelled,
                               std::string_view image_id) override;

 private:
  const DetectionMap& Load(int iteration);

  std::filesystem::path directory_;
  int num_classes_;
  int cursor_ = 0;
  std::map<int, DetectionMap> cache_;
};

}  // namespace alsel

#endif  // ALSEL_REPLAY_ADAPTER_H_
