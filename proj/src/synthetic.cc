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

#include "alsel/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>

namespace alsel {

namespace {

std::string ImageId(int camera, int index) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "cam%03d_img%05d", camera, index);
  return buf;
}

// Camera centers with pairwise distance `separation`: scaled orthonormal
// directions when M <= D, random unit directions otherwise.
std::vector<std::vector<double>> CameraCenters(int cameras, int dim,
                                               double separation,
                                               std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double radius = separation / std::sqrt(2.0);
  std::vector<std::vector<double>> centers;
  for (int m = 0; m < cameras; ++m) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (double& x : v) x = gauss(rng);
    if (m < dim) {
      for (const auto& prev : centers) {
        double dot = 0.0;
        for (int t = 0; t < dim; ++t) dot += v[t] * prev[t] / radius;
        for (int t = 0; t < dim; ++t) v[t] -= dot * prev[t] / radius;
      }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x *= radius / norm;
    centers.push_back(std::move(v));
  }
  return centers;
}

// Habitat class distribution per camera. Camera m always hosts class
// m mod C so that every class lives somewhere.
std::vector<std::vector<double>> HabitatWeights(const SyntheticPoolParams& p,
                                                std::mt19937_64& rng) {
  std::vector<double> global(static_cast<std::size_t>(p.num_classes));
  for (int c = 0; c < p.num_classes; ++c) {
    global[c] = std::pow(static_cast<double>(c + 1), -p.class_skew);
  }
  const int per_camera = std::min(p.classes_per_camera, p.num_classes);
  std::vector<std::vector<double>> out;
  for (int m = 0; m < p.num_cameras; ++m) {
    std::vector<double> w(global.size(), 0.0);
    w[static_cast<std::size_t>(m % p.num_classes)] = global[m % p.num_classes];
    for (int added = 1; added < per_camera; ++added) {
      std::vector<double> rest(global.size(), 0.0);
      for (std::size_t c = 0; c < global.size(); ++c) {
        if (w[c] == 0.0) rest[c] = global[c];
      }
      std::discrete_distribution<int> pick(rest.begin(), rest.end());
      const int c = pick(rng);
      w[static_cast<std::size_t>(c)] = global[static_cast<std::size_t>(c)];
    }
    out.push_back(std::move(w));
  }
  return out;
}

SyntheticImage MakeImage(int camera, const SyntheticPoolParams& p,
                         const std::vector<double>& habitat,
                         std::mt19937_64& rng) {
  SyntheticImage img;
  img.camera = camera;
  std::uniform_int_distribution<int> count(p.min_objects, p.max_objects);
  std::discrete_distribution<int> cls(habitat.begin(), habitat.end());
  std::uniform_real_distribution<double> pos(0.0, 1000.0);
  const int n = count(rng);
  for (int k = 0; k < n; ++k) {
    LatentObject obj;
    obj.class_id = cls(rng);
    obj.box = {pos(rng), pos(rng), 1.0, 1.0};
    img.objects.push_back(obj);
  }
  return img;
}

}  // namespace

void ValidateSyntheticParams(const SyntheticPoolParams& p) {
  auto fail = [](const std::string& what) {
    ThrowInvalidInput("synthetic pool: " + what);
  };
  if (p.num_cameras < 1) fail("num_cameras must be positive");
  if (p.images_per_camera < 1) fail("images_per_camera must be positive");
  if (p.num_classes < 1) fail("num_classes must be positive");
  if (p.embedding_dim < 1) fail("embedding_dim must be positive");
  if (!(p.camera_separation > 0.0)) fail("camera_separation must be positive");
  if (!(p.noise_scale >= 0.0)) fail("noise_scale must be >= 0");
  if (p.min_objects < 1 || p.max_objects < p.min_objects) {
    fail("objects per image must satisfy 1 <= min <= max");
  }
  if (!(p.class_skew >= 0.0)) fail("class_skew must be >= 0");
  if (p.classes_per_camera < 1) fail("classes_per_camera must be positive");
  if (p.probe_images_per_camera < 1) {
    fail("probe_images_per_camera must be positive");
  }
  const DetectorSkill& s = p.skill;
  if (!(s.base_quality >= 0.0 && s.camera_gain >= 0.0 && s.class_gain >= 0.0)) {
    fail("detector gains must be >= 0");
  }
  if (s.base_quality + s.camera_gain + s.class_gain > 1.0 + 1e-12) {
    fail("base_quality + camera_gain + class_gain must be <= 1");
  }
  if (!(s.saturation > 0.0)) fail("saturation must be positive");
  if (!(s.noise_scale >= 0.0)) fail("detector noise_scale must be >= 0");
}

std::vector<std::vector<int>> SyntheticPool::ImageClasses() const {
  std::vector<std::vector<int>> out;
  out.reserve(truth.size());
  for (const SyntheticImage& img : truth) {
    std::set<int> classes;
    for (const LatentObject& o : img.objects) classes.insert(o.class_id);
    out.emplace_back(classes.begin(), classes.end());
  }
  return out;
}

SyntheticPool MakeSyntheticPool(const SyntheticPoolParams& params,
                                std::uint64_t seed) {
  ValidateSyntheticParams(params);
  std::mt19937_64 rng(seed);
  const auto centers = CameraCenters(params.num_cameras, params.embedding_dim,
                                     params.camera_separation, rng);
  const auto habitats = HabitatWeights(params, rng);

  SyntheticPool out;
  out.params = params;
  out.seed = seed;
  out.pool.num_classes = params.num_classes;
  const std::size_t dim = static_cast<std::size_t>(params.embedding_dim);
  const std::size_t total = static_cast<std::size_t>(params.num_cameras) *
                            static_cast<std::size_t>(params.images_per_camera);
  std::vector<float> values;
  values.reserve(total * dim);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int m = 0; m < params.num_cameras; ++m) {
    for (int j = 0; j < params.images_per_camera; ++j) {
      SyntheticImage img = MakeImage(m, params, habitats[m], rng);
      for (std::size_t t = 0; t < dim; ++t) {
        const double e = params.noise_scale > 0.0 ? noise(rng) * params.noise_scale : 0.0;
        values.push_back(static_cast<float>(centers[m][t] + e));
      }
      ImageRecord rec;
      rec.image_id = ImageId(m, j);
      rec.embedding_index = out.pool.images.size();
      out.pool.images.push_back(std::move(rec));
      out.truth.push_back(std::move(img));
    }
  }
  out.pool.embeddings = EmbeddingMatrix(dim, std::move(values));
  for (int m = 0; m < params.num_cameras; ++m) {
    for (int j = 0; j < params.probe_images_per_camera; ++j) {
      out.probe.push_back(MakeImage(m, params, habitats[m], rng));
    }
  }
  return out;
}

double Coverage(double n, double saturation) { return n / (n + saturation); }

SyntheticDetector::SyntheticDetector(const SyntheticPool& pool,
                                     std::uint64_t seed)
    : pool_(pool), seed_(seed) {
  for (std::size_t i = 0; i < pool_.pool.images.size(); ++i) {
    index_.emplace(pool_.pool.images[i].image_id, i);
  }
  counts_ = CountLabelled({});
}

SyntheticDetector::Counts SyntheticDetector::CountLabelled(
    std::span<const std::string> labelled) const {
  Counts c;
  c.per_camera.assign(static_cast<std::size_t>(pool_.params.num_cameras), 0);
  c.per_class.assign(static_cast<std::size_t>(pool_.params.num_classes), 0);
  for (const std::string& id : labelled) {
    auto it = index_.find(id);
    if (it == index_.end()) {
      ThrowInvalidInput("synthetic detector: unknown labelled image '" + id + "'");
    }
    const SyntheticImage& img = pool_.truth[it->second];
    ++c.per_camera[static_cast<std::size_t>(img.camera)];
    std::set<int> classes;
    for (const LatentObject& o : img.objects) classes.insert(o.class_id);
    for (int k : classes) ++c.per_class[static_cast<std::size_t>(k)];
  }
  return c;
}

double SyntheticDetector::Score(const Counts& counts, int camera,
                                int class_id) const {
  const DetectorSkill& s = pool_.params.skill;
  const double cam =
      Coverage(counts.per_camera[static_cast<std::size_t>(camera)], s.saturation);
  const double cls =
      Coverage(counts.per_class[static_cast<std::size_t>(class_id)], s.saturation);
  return std::clamp(s.base_quality + s.camera_gain * cam + s.class_gain * cls,
                    0.0, 1.0);
}

void SyntheticDetector::NotifyTrained(std::span<const std::string> labelled) {
  counts_ = CountLabelled(labelled);
  ++round_;
}

std::vector<Detection> SyntheticDetector::Infer(
    std::span<const std::string> /*labelled*/, std::string_view image_id) {
  auto it = index_.find(std::string(image_id));
  if (it == index_.end()) {
    ThrowInvalidInput("synthetic detector: unknown image '" +
                      std::string(image_id) + "'");
  }
  const SyntheticImage& img = pool_.truth[it->second];
  std::mt19937_64 rng(DeriveSeed(
      DeriveSeed(seed_, static_cast<std::uint64_t>(round_)), it->second));
  std::normal_distribution<double> eps(0.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const DetectorSkill& skill = pool_.params.skill;
  const int num_classes = pool_.params.num_classes;

  std::vector<Detection> out;
  for (const LatentObject& obj : img.objects) {
    const double noise = eps(rng) * skill.noise_scale;
    const double emit = coin(rng);
    const double s = std::clamp(
        Score(counts_, img.camera, obj.class_id) + noise, 0.0, 1.0);
    if (!(emit < s)) continue;
    Detection d;
    d.bbox = obj.box;
    d.score = s;
    std::vector<double> probs(static_cast<std::size_t>(num_classes),
                              num_classes > 1 ? (1.0 - s) / (num_classes - 1) : 1.0);
    probs[static_cast<std::size_t>(obj.class_id)] = num_classes > 1 ? s : 1.0;
    d.class_id = static_cast<int>(ArgMax(probs));
    d.probs = std::move(probs);
    out.push_back(std::move(d));
  }
  return out;
}

double SyntheticDetector::ExpectedScore(std::span<const std::string> labelled,
                                        int camera, int class_id) const {
  return Score(CountLabelled(labelled), camera, class_id);
}

double SyntheticDetector::QualityProxy(
    std::span<const std::string> labelled) const {
  const Counts counts = CountLabelled(labelled);
  std::map<int, std::pair<double, int>> per_class;
  for (const SyntheticImage& img : pool_.probe) {
    for (const LatentObject& o : img.objects) {
      auto& acc = per_class[o.class_id];
      acc.first += Score(counts, img.camera, o.class_id);
      ++acc.second;
    }
  }
  double total = 0.0;
  for (const auto& [cls, acc] : per_class) total += acc.first / acc.second;
  return per_class.empty() ? 0.0 : total / static_cast<double>(per_class.size());
}

}  // namespace alsel
