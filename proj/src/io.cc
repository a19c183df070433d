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

#include "alsel/io.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

namespace alsel {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string Quote(const fs::path& p) { return "'" + p.string() + "'"; }

std::string ReadFileBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowIo("cannot open " + Quote(path) + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) ThrowIo("error while reading " + Quote(path));
  return std::move(buf).str();
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

std::uint32_t GetU32(const std::string& in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + b]))
         << (8 * b);
  }
  return v;
}

void CheckIds(std::span<const std::string> ids, const std::string& what) {
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i].empty()) ThrowInvalidInput(what + ": id #" + std::to_string(i) + " is empty");
    if (ids[i].find('\n') != std::string::npos) {
      ThrowInvalidInput(what + ": id '" + ids[i] + "' contains a newline");
    }
    if (!seen.insert(ids[i]).second) {
      ThrowInvalidInput(what + ": duplicate id '" + ids[i] + "'");
    }
  }
}

// Key-checked accessors for JSON documents. `where` names the enclosing
// object in error messages.
void RejectUnknownKeys(const json& obj, std::initializer_list<std::string_view> keys,
                       const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (std::string_view k : keys) known = known || it.key() == k;
    if (!known) ThrowFormat(where + ": unknown field '" + it.key() + "'");
  }
}

const json& Require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) ThrowFormat(where + ": missing field '" + key + "'");
  return *it;
}

double AsDouble(const json& v, const std::string& field) {
  if (!v.is_number()) ThrowFormat(field + ": expected a number");
  return v.get<double>();
}

std::int64_t AsInt(const json& v, const std::string& field) {
  if (!v.is_number_integer()) ThrowFormat(field + ": expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t AsU64(const json& v, const std::string& field) {
  // Parsed text yields unsigned values; built documents may hold signed ones.
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  ThrowFormat(field + ": expected a non-negative integer");
}

std::string AsString(const json& v, const std::string& field) {
  if (!v.is_string()) ThrowFormat(field + ": expected a string");
  return v.get<std::string>();
}

template <typename T>
std::optional<T> OptionalField(const json& obj, const char* key,
                               const std::string& where,
                               T (*convert)(const json&, const std::string&)) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return convert(*it, where + "." + key);
}

json OptionalToJson(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

Method MethodFromJson(const json& v, const std::string& field) {
  const std::string name = AsString(v, field);
  auto m = ParseMethod(name);
  if (!m) ThrowFormat(field + ": unknown method '" + name + "' (valid: " + MethodList() + ")");
  return *m;
}

}  // namespace

std::string DumpDocument(const json& j) { return j.dump(2) + "\n"; }

void WriteTextFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) ThrowIo("cannot open " + Quote(path) + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) ThrowIo("error while writing " + Quote(path));
}

void WriteIdList(std::span<const std::string> ids, const fs::path& path) {
  CheckIds(ids, "id list " + Quote(path));
  std::string text;
  for (const std::string& id : ids) {
    text += id;
    text += '\n';
  }
  WriteTextFile(path, text);
}

std::vector<std::string> ReadIdList(const fs::path& path) {
  const std::string text = ReadFileBytes(path);
  std::vector<std::string> ids;
  std::unordered_set<std::string> seen;
  std::size_t start = 0;
  std::size_t line = 1;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string id = text.substr(start, end - start);
    const std::string where = Quote(path) + " line " + std::to_string(line);
    if (id.empty()) ThrowFormat(where + ": empty id");
    if (!seen.insert(id).second) ThrowFormat(where + ": duplicate id '" + id + "'");
    ids.push_back(std::move(id));
    start = end + 1;
    ++line;
  }
  return ids;
}

void WriteEmbeddings(const EmbeddingMatrix& matrix,
                     std::span<const std::string> ids, const fs::path& path,
                     const fs::path& ids_path) {
  if (ids.size() != matrix.rows()) {
    ThrowInvalidInput("write embeddings: " + std::to_string(ids.size()) +
                      " ids for " + std::to_string(matrix.rows()) + " rows");
  }
  CheckIds(ids, "write embeddings");
  constexpr std::size_t kMax = std::numeric_limits<std::uint32_t>::max();
  if (matrix.rows() > kMax || matrix.dim() > kMax || matrix.dim() == 0) {
    ThrowInvalidInput("write embeddings: N or D outside the u32 header range");
  }
  std::string bytes;
  bytes.reserve(kEmbeddingHeaderBytes + 4 * matrix.values().size());
  bytes.append(kEmbeddingMagic, 4);
  PutU32(bytes, kEmbeddingVersion);
  PutU32(bytes, static_cast<std::uint32_t>(matrix.rows()));
  PutU32(bytes, static_cast<std::uint32_t>(matrix.dim()));
  for (float v : matrix.values()) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    PutU32(bytes, bits);
  }
  WriteTextFile(path, bytes);
  WriteIdList(ids, ids_path);
}

EmbeddingFile ReadEmbeddings(const fs::path& path, const fs::path& ids_path) {
  const std::string bytes = ReadFileBytes(path);
  const std::string where = Quote(path);
  if (bytes.size() < kEmbeddingHeaderBytes) {
    ThrowFormat(where + ": expected at least " +
                std::to_string(kEmbeddingHeaderBytes) + " header bytes, got " +
                std::to_string(bytes.size()));
  }
  if (std::memcmp(bytes.data(), kEmbeddingMagic, 4) != 0) {
    ThrowFormat(where + ": byte offset 0: bad magic, expected \"EMB1\"");
  }
  if (const std::uint32_t version = GetU32(bytes, 4); version != kEmbeddingVersion) {
    ThrowFormat(where + ": byte offset 4: unsupported version " +
                std::to_string(version));
  }
  const std::uint64_t n = GetU32(bytes, 8);
  const std::uint64_t d = GetU32(bytes, 12);
  if (d == 0) ThrowFormat(where + ": byte offset 12: dimension must be positive");
  const std::uint64_t expected = kEmbeddingHeaderBytes + 4 * n * d;
  if (bytes.size() != expected) {
    ThrowFormat(where + ": expected length " + std::to_string(expected) +
                " bytes (N = " + std::to_string(n) + ", D = " +
                std::to_string(d) + "), actual length " +
                std::to_string(bytes.size()));
  }
  std::vector<float> values(static_cast<std::size_t>(n * d));
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t offset = kEmbeddingHeaderBytes + 4 * i;
    const std::uint32_t bits = GetU32(bytes, offset);
    std::memcpy(&values[i], &bits, sizeof(bits));
    if (!std::isfinite(values[i])) {
      ThrowFormat(where + ": byte offset " + std::to_string(offset) +
                  ": non-finite value (row " + std::to_string(i / d) +
                  ", column " + std::to_string(i % d) + ")");
    }
  }
  EmbeddingFile out;
  out.ids = ReadIdList(ids_path);
  if (out.ids.size() != n) {
    ThrowFormat(Quote(ids_path) + ": " + std::to_string(out.ids.size()) +
                " ids for " + std::to_string(n) + " embedding rows in " + where);
  }
  out.matrix = EmbeddingMatrix(static_cast<std::size_t>(d), std::move(values));
  return out;
}

json DetectionToJson(const Detection& d) {
  json j;
  j["bbox"] = {d.bbox.x, d.bbox.y, d.bbox.width, d.bbox.height};
  j["score"] = d.score;
  j["class_id"] = d.class_id;
  if (d.probs) j["probs"] = *d.probs;
  return j;
}

namespace {

Detection DetectionFromJsonAt(const json& j, const std::string& where) {
  if (!j.is_object()) ThrowFormat(where + ": expected an object");
  RejectUnknownKeys(j, {"bbox", "score", "class_id", "probs"}, where);
  Detection d;
  const json& bbox = Require(j, "bbox", where);
  if (!bbox.is_array() || bbox.size() != 4) {
    ThrowFormat(where + ".bbox: expected an array of 4 numbers");
  }
  d.bbox = {AsDouble(bbox[0], where + ".bbox[0]"), AsDouble(bbox[1], where + ".bbox[1]"),
            AsDouble(bbox[2], where + ".bbox[2]"), AsDouble(bbox[3], where + ".bbox[3]")};
  d.score = AsDouble(Require(j, "score", where), where + ".score");
  const std::int64_t cls = AsInt(Require(j, "class_id", where), where + ".class_id");
  if (cls < std::numeric_limits<int>::min() || cls > std::numeric_limits<int>::max()) {
    ThrowFormat(where + ".class_id: out of range");
  }
  d.class_id = static_cast<int>(cls);
  if (auto it = j.find("probs"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) ThrowFormat(where + ".probs: expected an array");
    std::vector<double> probs;
    for (std::size_t c = 0; c < it->size(); ++c) {
      probs.push_back(AsDouble((*it)[c], where + ".probs[" + std::to_string(c) + "]"));
    }
    d.probs = std::move(probs);
  }
  return d;
}

}  // namespace

Detection DetectionFromJson(const json& j) {
  return DetectionFromJsonAt(j, "detection");
}

DetectionMap ReadDetections(const fs::path& path, int num_classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowIo("cannot open " + Quote(path) + " for reading");
  DetectionMap out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = Quote(path) + " line " + std::to_string(number);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      ThrowFormat(where + ": malformed JSON: " + e.what());
    }
    if (!j.is_object()) ThrowFormat(where + ": expected a JSON object");
    RejectUnknownKeys(j, {"image_id", "detections"}, where);
    std::string id = AsString(Require(j, "image_id", where), where + ": image_id");
    if (id.empty()) ThrowFormat(where + ": image_id is empty");
    const json& dets = Require(j, "detections", where);
    if (!dets.is_array()) ThrowFormat(where + ": detections: expected an array");
    std::vector<Detection> parsed;
    for (std::size_t k = 0; k < dets.size(); ++k) {
      const std::string field = where + ": detections[" + std::to_string(k) + "]";
      Detection d = DetectionFromJsonAt(dets[k], field);
      if (auto v = ValidateDetection(d, num_classes, field); !v.empty()) {
        ThrowInvalidInput(v.front());
      }
      parsed.push_back(std::move(d));
    }
    if (!out.emplace(id, std::move(parsed)).second) {
      ThrowFormat(where + ": duplicate image_id '" + id + "'");
    }
  }
  if (in.bad()) ThrowIo("error while reading " + Quote(path));
  return out;
}

void WriteDetections(const DetectionMap& detections, const fs::path& path) {
  std::string text;
  for (const auto& [id, dets] : detections) {
    json line;
    line["image_id"] = id;
    line["detections"] = json::array();
    for (const Detection& d : dets) line["detections"].push_back(DetectionToJson(d));
    text += line.dump();
    text += '\n';
  }
  WriteTextFile(path, text);
}

json SelectionToJson(const SelectionResult& r) {
  json j;
  j["method"] = MethodName(r.method);
  j["iteration"] = r.iteration;
  j["alpha_used"] = OptionalToJson(r.alpha_used);
  j["selected"] = r.selected;
  j["audit"] = json::array();
  for (const PickAudit& a : r.audit) {
    json e;
    e["id"] = a.image_id;
    e["u"] = OptionalToJson(a.uncertainty);
    e["v"] = OptionalToJson(a.diversity);
    e["z"] = OptionalToJson(a.score);
    e["cluster"] = a.cluster ? json(*a.cluster) : json(nullptr);
    j["audit"].push_back(std::move(e));
  }
  return j;
}

SelectionResult SelectionFromJson(const json& j) {
  const std::string where = "selection";
  if (!j.is_object()) ThrowFormat(where + ": expected an object");
  SelectionResult r;
  r.method = MethodFromJson(Require(j, "method", where), where + ".method");
  if (auto it = j.find("iteration"); it != j.end()) {
    r.iteration = static_cast<int>(AsInt(*it, where + ".iteration"));
  }
  r.alpha_used = OptionalField<double>(j, "alpha_used", where, AsDouble);
  const json& selected = Require(j, "selected", where);
  if (!selected.is_array()) ThrowFormat(where + ".selected: expected an array");
  for (std::size_t i = 0; i < selected.size(); ++i) {
    r.selected.push_back(AsString(selected[i], where + ".selected[" + std::to_string(i) + "]"));
  }
  if (auto it = j.find("audit"); it != j.end()) {
    if (!it->is_array()) ThrowFormat(where + ".audit: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& e = (*it)[i];
      const std::string w = where + ".audit[" + std::to_string(i) + "]";
      if (!e.is_object()) ThrowFormat(w + ": expected an object");
      PickAudit a;
      a.image_id = AsString(Require(e, "id", w), w + ".id");
      a.uncertainty = OptionalField<double>(e, "u", w, AsDouble);
      a.diversity = OptionalField<double>(e, "v", w, AsDouble);
      a.score = OptionalField<double>(e, "z", w, AsDouble);
      if (auto c = OptionalField<std::int64_t>(e, "cluster", w, AsInt)) {
        a.cluster = static_cast<int>(*c);
      }
      r.audit.push_back(std::move(a));
    }
  }
  return r;
}

void WriteSelection(const SelectionResult& result, const fs::path& path) {
  WriteTextFile(path, DumpDocument(SelectionToJson(result)));
}

namespace {

json ParseDocument(const fs::path& path) {
  const std::string text = ReadFileBytes(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    ThrowFormat(Quote(path) + ": malformed JSON: " + e.what());
  }
}

template <typename T>
T WithPath(const fs::path& path, T (*parse)(const json&), const json& j) {
  try {
    return parse(j);
  } catch (const Error& e) {
    throw Error(e.code(), Quote(path) + ": " + e.what());
  }
}

}  // namespace

SelectionResult ReadSelection(const fs::path& path) {
  return WithPath(path, SelectionFromJson, ParseDocument(path));
}

json ReportToJson(const RunReport& report, bool include_timing) {
  json j;
  j["method"] = MethodName(report.method);
  j["seed"] = report.seed;
  j["pool_size"] = report.pool_size;
  j["seed_size"] = report.seed_size;
  j["budget"] = report.budget;
  j["final_labelled"] = report.final_labelled;
  j["quality_auc"] = OptionalToJson(report.quality_auc);
  j["iterations"] = json::array();
  for (const IterationRecord& r : report.iterations) {
    json e;
    e["iteration"] = r.iteration;
    e["labelled_count"] = r.labelled_count;
    e["unlabelled_before"] = r.unlabelled_before;
    e["alpha"] = OptionalToJson(r.alpha);
    e["quality"] = OptionalToJson(r.quality);
    e["selection"] = r.selection ? SelectionToJson(*r.selection) : json(nullptr);
    if (include_timing) e["wall_seconds"] = r.wall_seconds;
    j["iterations"].push_back(std::move(e));
  }
  return j;
}

RunReport ReportFromJson(const json& j) {
  const std::string where = "report";
  if (!j.is_object()) ThrowFormat(where + ": expected an object");
  RunReport r;
  r.method = MethodFromJson(Require(j, "method", where), where + ".method");
  r.seed = AsU64(Require(j, "seed", where), where + ".seed");
  r.pool_size = AsInt(Require(j, "pool_size", where), where + ".pool_size");
  r.seed_size = AsInt(Require(j, "seed_size", where), where + ".seed_size");
  r.budget = AsInt(Require(j, "budget", where), where + ".budget");
  r.final_labelled = AsInt(Require(j, "final_labelled", where), where + ".final_labelled");
  r.quality_auc = OptionalField<double>(j, "quality_auc", where, AsDouble);
  const json& iters = Require(j, "iterations", where);
  if (!iters.is_array()) ThrowFormat(where + ".iterations: expected an array");
  for (std::size_t i = 0; i < iters.size(); ++i) {
    const json& e = iters[i];
    const std::string w = where + ".iterations[" + std::to_string(i) + "]";
    if (!e.is_object()) ThrowFormat(w + ": expected an object");
    IterationRecord rec;
    rec.iteration = static_cast<int>(AsInt(Require(e, "iteration", w), w + ".iteration"));
    rec.labelled_count = AsInt(Require(e, "labelled_count", w), w + ".labelled_count");
    rec.unlabelled_before =
        AsInt(Require(e, "unlabelled_before", w), w + ".unlabelled_before");
    rec.alpha = OptionalField<double>(e, "alpha", w, AsDouble);
    rec.quality = OptionalField<double>(e, "quality", w, AsDouble);
    if (auto it = e.find("selection"); it != e.end() && !it->is_null()) {
      rec.selection = SelectionFromJson(*it);
    }
    if (auto t = OptionalField<double>(e, "wall_seconds", w, AsDouble)) {
      rec.wall_seconds = *t;
    }
    r.iterations.push_back(std::move(rec));
  }
  return r;
}

void WriteReport(const RunReport& report, const fs::path& path,
                 bool include_timing) {
  WriteTextFile(path, DumpDocument(ReportToJson(report, include_timing)));
}

RunReport ReadReport(const fs::path& path) {
  return WithPath(path, ReportFromJson, ParseDocument(path));
}

namespace {

template <typename T>
void ReadInto(const json& obj, const char* key, const std::string& where, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  const std::string field = where + "." + key;
  if constexpr (std::is_same_v<T, double>) {
    out = AsDouble(*it, field);
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    out = AsU64(*it, field);
  } else {
    const std::int64_t v = AsInt(*it, field);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      ThrowFormat(field + ": out of range");
    }
    out = static_cast<int>(v);
  }
}

}  // namespace

SimulationConfig SimulationConfigFromJson(const json& j) {
  if (!j.is_object()) ThrowFormat("config: expected an object");
  RejectUnknownKeys(j, {"loop", "pool", "pool_seed", "detector_seed"}, "config");
  SimulationConfig c;
  if (auto it = j.find("loop"); it != j.end()) {
    const json& l = *it;
    const std::string w = "config.loop";
    if (!l.is_object()) ThrowFormat(w + ": expected an object");
    RejectUnknownKeys(l,
                      {"seed_fraction", "budget_fraction", "num_iterations", "method",
                       "seed", "alpha0", "diversity_norm", "empty_u"},
                      w);
    ReadInto(l, "seed_fraction", w, c.loop.seed_fraction);
    ReadInto(l, "budget_fraction", w, c.loop.budget_fraction);
    ReadInto(l, "num_iterations", w, c.loop.num_iterations);
    if (auto m = l.find("method"); m != l.end()) c.loop.method = MethodFromJson(*m, w + ".method");
    ReadInto(l, "seed", w, c.loop.seed);
    ReadInto(l, "alpha0", w, c.loop.selector.alpha0);
    ReadInto(l, "empty_u", w, c.loop.selector.empty_policy.value);
    if (auto n = l.find("diversity_norm"); n != l.end()) {
      const std::string name = AsString(*n, w + ".diversity_norm");
      if (name == "none") {
        c.loop.selector.diversity_norm = DiversityNorm::kNone;
      } else if (name == "max") {
        c.loop.selector.diversity_norm = DiversityNorm::kDivideByMax;
      } else {
        ThrowFormat(w + ".diversity_norm: expected \"none\" or \"max\"");
      }
    }
  }
  if (auto it = j.find("pool"); it != j.end()) {
    const json& p = *it;
    const std::string w = "config.pool";
    if (!p.is_object()) ThrowFormat(w + ": expected an object");
    RejectUnknownKeys(p,
                      {"num_cameras", "images_per_camera", "num_classes", "embedding_dim",
                       "camera_separation", "noise_scale", "min_objects", "max_objects",
                       "class_skew", "classes_per_camera", "probe_images_per_camera",
                       "skill"},
                      w);
    SyntheticPoolParams& s = c.pool;
    ReadInto(p, "num_cameras", w, s.num_cameras);
    ReadInto(p, "images_per_camera", w, s.images_per_camera);
    ReadInto(p, "num_classes", w, s.num_classes);
    ReadInto(p, "embedding_dim", w, s.embedding_dim);
    ReadInto(p, "camera_separation", w, s.camera_separation);
    ReadInto(p, "noise_scale", w, s.noise_scale);
    ReadInto(p, "min_objects", w, s.min_objects);
    ReadInto(p, "max_objects", w, s.max_objects);
    ReadInto(p, "class_skew", w, s.class_skew);
    ReadInto(p, "classes_per_camera", w, s.classes_per_camera);
    ReadInto(p, "probe_images_per_camera", w, s.probe_images_per_camera);
    if (auto k = p.find("skill"); k != p.end()) {
      const std::string ws = w + ".skill";
      if (!k->is_object()) ThrowFormat(ws + ": expected an object");
      RejectUnknownKeys(*k,
                        {"base_quality", "camera_gain", "class_gain", "saturation",
                         "noise_scale"},
                        ws);
      ReadInto(*k, "base_quality", ws, s.skill.base_quality);
      ReadInto(*k, "camera_gain", ws, s.skill.camera_gain);
      ReadInto(*k, "class_gain", ws, s.skill.class_gain);
      ReadInto(*k, "saturation", ws, s.skill.saturation);
      ReadInto(*k, "noise_scale", ws, s.skill.noise_scale);
    }
  }
  c.pool_seed = DeriveSeed(c.loop.seed, 101);
  c.detector_seed = DeriveSeed(c.loop.seed, 202);
  ReadInto(j, "pool_seed", "config", c.pool_seed);
  ReadInto(j, "detector_seed", "config", c.detector_seed);
  return c;
}

json SimulationConfigToJson(const SimulationConfig& c) {
  json j;
  const SelectorConfig& sel = c.loop.selector;
  j["loop"] = {
      {"seed_fraction", c.loop.seed_fraction},
      {"budget_fraction", c.loop.budget_fraction},
      {"num_iterations", c.loop.num_iterations},
      {"method", MethodName(c.loop.method)},
      {"seed", c.loop.seed},
      {"alpha0", sel.alpha0},
      {"diversity_norm", sel.diversity_norm == DiversityNorm::kNone ? "none" : "max"},
      {"empty_u", sel.empty_policy.value},
  };
  const SyntheticPoolParams& s = c.pool;
  j["pool"] = {
      {"num_cameras", s.num_cameras},
      {"images_per_camera", s.images_per_camera},
      {"num_classes", s.num_classes},
      {"embedding_dim", s.embedding_dim},
      {"camera_separation", s.camera_separation},
      {"noise_scale", s.noise_scale},
      {"min_objects", s.min_objects},
      {"max_objects", s.max_objects},
      {"class_skew", s.class_skew},
      {"classes_per_camera", s.classes_per_camera},
      {"probe_images_per_camera", s.probe_images_per_camera},
      {"skill",
       {{"base_quality", s.skill.base_quality},
        {"camera_gain", s.skill.camera_gain},
        {"class_gain", s.skill.class_gain},
        {"saturation", s.skill.saturation},
        {"noise_scale", s.skill.noise_scale}}},
  };
  j["pool_seed"] = c.pool_seed;
  j["detector_seed"] = c.detector_seed;
  return j;
}

SimulationConfig ReadSimulationConfig(const fs::path& path) {
  return WithPath(path, SimulationConfigFromJson, ParseDocument(path));
}

}  // namespace alsel
