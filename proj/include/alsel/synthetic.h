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

// Desk-scale camera-trap simulator. Cameras are embedding clusters; each
// image carries latent objects; a synthetic detector's skill grows with
// saturating coverage of the labelled set per camera and per class.

#ifndef ALSEL_SYNTHETIC_H_
#define ALSEL_SYNTHETIC_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "alsel/core_model.h"
#include "alsel/loop_sim.h"

namespace alsel {

struct DetectorSkill {
  double base_quality = 0.1;   // q0
  double camera_gain = 0.4;    // a
  double class_gain = 0.4;     // b
  double saturation = 5.0;     // h in n / (n + h)
  double noise_scale = 0.05;   // sigma of the per-detection score noise

  bool operator==(const DetectorSkill&) const = default;
};

struct SyntheticPoolParams {
  int num_cameras = 20;
  int images_per_camera = 100;
  int num_classes = 7;
  int embedding_dim = 64;
  double camera_separation = 20.0;
  double noise_scale = 1.0;
  int min_objects = 1;
  int max_objects = 3;
  // Global class frequencies follow (c + 1)^-class_skew.
  double class_skew = 2.0;
  // Number of classes living in each camera's habitat.
  int classes_per_camera = 3;
  // Held-out images per camera used by the quality proxy.
  int probe_images_per_camera = 10;
  DetectorSkill skill;

  bool operator==(const SyntheticPoolParams&) const = default;
};

void ValidateSyntheticParams(const SyntheticPoolParams& params);

struct LatentObject {
  int class_id = 0;
  BoundingBox box;
};

struct SyntheticImage {
  int camera = 0;
  std::vector<LatentObject> objects;
};

struct SyntheticPool {
  Pool pool;
  // Ground truth, indexed like pool.images. Never shown to selectors.
  std::vector<SyntheticImage> truth;
  std::vector<SyntheticImage> probe;
  SyntheticPoolParams params;
  std::uint64_t seed = 0;

  // Distinct latent classes per pool image, ascending.
  std::vector<std::vector<int>> ImageClasses() const;
};

SyntheticPool MakeSyntheticPool(const SyntheticPoolParams& params,
                                std::uint64_t seed);

// n / (n + h).
double Coverage(double n, double saturation);

class SyntheticDetector : public DetectorAdapter {
 public:
  SyntheticDetector(const SyntheticPool& pool, std::uint64_t seed);

  void NotifyTrained(std::span<const std::string> labelled) override;

  // Per latent object: s = clamp(q0 + a cov_cam + b cov_cls + eps, 0, 1),
  // emitted with probability s. Coverage comes from the last NotifyTrained.
  std::vector<Detection> Infer(std::span<const std::string> labelled,
                               std::string_view image_id) override;

  // Noise-free score of an object of `class_id` in `camera` under the
  // coverage counts implied by `labelled`.
  double ExpectedScore(std::span<const std::string> labelled, int camera,
                       int class_id) const;

  // Mean noise-free score on the probe objects, averaged within each class
  // and then across classes (class-balanced, like mAP).
  double QualityProxy(std::span<const std::string> labelled) const;

  int round() const { return round_; }

 private:
  struct Counts {
    std::vector<int> per_camera;
    std::vector<int> per_class;
  };
  Counts CountLabelled(std::span<const std::string> labelled) const;
  double Score(const Counts& counts, int camera, int class_id) const;

  const SyntheticPool& pool_;
  std::uint64_t seed_;
  std::unordered_map<std::string, std::size_t> index_;
  Counts counts_;
  int round_ = 0;
};

}  // namespace alsel

#endif  // ALSEL_SYNTHETIC_H_
