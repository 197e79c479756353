// Copyright 2026 The Interest Storyboard Authors.
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

#include "interest/feature_store.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "interest/errors.h"

namespace interest {

namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "binary feature sidecars assume a little-endian host");

std::string Describe(std::size_t record, const std::string& id) {
  return "record " + std::to_string(record) +
         (id.empty() ? std::string() : " (id '" + id + "')");
}

FeatureVector ParseRecord(const json& j, std::size_t record) {
  if (!j.is_object()) {
    throw LoadError("feature file: " + Describe(record, "") +
                        " is not a JSON object",
                    record);
  }
  FeatureVector out;
  try {
    out.id = j.at("id").get<std::string>();
    out.path = j.value("path", std::string());
    const auto& feats = j.at("features");
    if (!feats.is_array()) throw LoadError("features is not an array", record);
    out.features.resize(static_cast<Eigen::Index>(feats.size()));
    for (std::size_t k = 0; k < feats.size(); ++k) {
      out.features[static_cast<Eigen::Index>(k)] = feats[k].get<double>();
    }
  } catch (const json::exception& e) {
    throw LoadError("feature file: " + Describe(record, out.id) + ": " +
                        e.what(),
                    record);
  }
  return out;
}

void AddOrThrow(FeatureStore& store, FeatureVector record, std::size_t ordinal) {
  const std::string id = record.id;
  try {
    store.Add(std::move(record));
  } catch (const InvalidArgumentError& e) {
    throw LoadError("feature file: " + Describe(ordinal, id) + ": " + e.what(),
                    ordinal);
  }
}

FeatureStore LoadJsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open feature file " + path.string(), 0);
  FeatureStore store(path.parent_path());
  std::string line;
  std::size_t record = 0;
  while (std::getline(in, line)) {
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    ++record;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw LoadError("feature file: " + Describe(record, "") +
                          " is not valid JSON: " + e.what(),
                      record);
    }
    AddOrThrow(store, ParseRecord(j, record), record);
  }
  return store;
}

FeatureStore LoadBinary(const std::filesystem::path& header_path) {
  std::ifstream hin(header_path);
  if (!hin) throw LoadError("cannot open feature header " + header_path.string(), 0);
  json header;
  try {
    header = json::parse(hin);
  } catch (const json::parse_error& e) {
    throw LoadError("feature header is not valid JSON: " + std::string(e.what()), 0);
  }
  std::int64_t dim = 0;
  std::filesystem::path data_path;
  json records;
  try {
    dim = header.at("dim").get<std::int64_t>();
    data_path = header_path.parent_path() / header.at("data").get<std::string>();
    records = header.at("records");
  } catch (const json::exception& e) {
    throw LoadError("feature header: " + std::string(e.what()), 0);
  }
  if (dim <= 0 || !records.is_array()) {
    throw LoadError("feature header: dim must be positive and records an array", 0);
  }

  std::ifstream din(data_path, std::ios::binary);
  if (!din) throw LoadError("cannot open feature data " + data_path.string(), 0);
  FeatureStore store(header_path.parent_path());
  std::vector<float> row(static_cast<std::size_t>(dim));
  for (std::size_t r = 0; r < records.size(); ++r) {
    const std::size_t ordinal = r + 1;
    if (!din.read(reinterpret_cast<char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)))) {
      throw LoadError("feature data truncated at " + Describe(ordinal, ""),
                      ordinal);
    }
    FeatureVector fv;
    try {
      fv.id = records[r].at("id").get<std::string>();
      fv.path = records[r].value("path", std::string());
    } catch (const json::exception& e) {
      throw LoadError("feature header: " + Describe(ordinal, "") + ": " + e.what(),
                      ordinal);
    }
    fv.features = Eigen::Map<const Eigen::VectorXf>(row.data(), dim).cast<double>();
    AddOrThrow(store, std::move(fv), ordinal);
  }
  if (din.peek() != std::char_traits<char>::eof()) {
    throw LoadError("feature data has trailing bytes beyond " +
                        std::to_string(records.size()) + " records",
                    0);
  }
  return store;
}

}  // namespace

void FeatureStore::Add(FeatureVector record) {
  if (index_.contains(record.id)) {
    throw InvalidArgumentError("duplicate image id '" + record.id + "'");
  }
  if (!records_.empty() && record.features.size() != records_.front().features.size()) {
    throw InvalidArgumentError(
        "dimension mismatch: expected " +
        std::to_string(records_.front().features.size()) + ", got " +
        std::to_string(record.features.size()));
  }
  if (record.features.size() == 0) {
    throw InvalidArgumentError("empty feature vector");
  }
  if (!record.features.allFinite()) {
    throw InvalidArgumentError("non-finite feature value");
  }
  if (record.features.norm() == 0.0) {
    throw InvalidArgumentError("zero-norm feature vector");
  }
  index_.emplace(record.id, records_.size());
  records_.push_back(std::move(record));
}

std::optional<Eigen::Index> FeatureStore::dim() const {
  if (records_.empty()) return std::nullopt;
  return records_.front().features.size();
}

const FeatureVector* FeatureStore::Find(std::string_view id) const {
  auto idx = IndexOf(id);
  return idx ? &records_[*idx] : nullptr;
}

std::optional<std::size_t> FeatureStore::IndexOf(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<ImageId> FeatureStore::ids() const {
  std::vector<ImageId> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.id);
  return out;
}

FeatureStore LoadFeatures(const std::filesystem::path& path) {
  if (path.extension() == ".json") return LoadBinary(path);
  return LoadJsonl(path);
}

void WriteFeaturesJsonl(const FeatureStore& store,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write feature file " + path.string());
  for (const FeatureVector& r : store) {
    json j = {{"id", r.id},
              {"path", r.path},
              {"features", std::vector<double>(r.features.begin(),
                                               r.features.end())}};
    out << j.dump() << '\n';
  }
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

void WriteFeaturesBinary(const FeatureStore& store,
                         const std::filesystem::path& header) {
  std::filesystem::path data = header;
  data.replace_extension(".bin");
  json records = json::array();
  std::ofstream dout(data, std::ios::binary);
  if (!dout) throw IoError("cannot write " + data.string());
  for (const FeatureVector& r : store) {
    records.push_back({{"id", r.id}, {"path", r.path}});
    const Eigen::VectorXf row = r.features.cast<float>();
    dout.write(reinterpret_cast<const char*>(row.data()),
               static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!dout.flush()) throw IoError("failed writing " + data.string());
  std::ofstream hout(header);
  if (!hout) throw IoError("cannot write " + header.string());
  hout << json{{"dim", store.dim().value_or(0)},
               {"data", data.filename().string()},
               {"records", records}}
              .dump(1)
       << '\n';
}

double CosineDistance(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size()) {
    throw InvalidArgumentError("CosineDistance: dimension mismatch " +
                               std::to_string(a.size()) + " vs " +
                               std::to_string(b.size()));
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw NumericalError("CosineDistance: zero-norm vector");
  }
  // |a/|a| - b/|b||^2 / 2 equals 1 - cos exactly in real arithmetic and stays
  // accurate near zero where 1 - dot would cancel.
  const double d = 0.5 * (a / na - b / nb).squaredNorm();
  return std::clamp(d, 0.0, 2.0);
}

void KernelConfig::Validate() const {
  if (!(length_scale > 0.0) || !std::isfinite(length_scale)) {
    throw InvalidArgumentError("KernelConfig: length_scale must be > 0");
  }
  if (!(jitter >= 0.0) || !std::isfinite(jitter)) {
    throw InvalidArgumentError("KernelConfig: jitter must be >= 0");
  }
}

double KernelValue(const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b,
                   const KernelConfig& cfg) {
  cfg.Validate();
  const double d = CosineDistance(a, b);
  return std::exp(-d / (2.0 * cfg.length_scale * cfg.length_scale));
}

}  // namespace interest
