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

#ifndef INTEREST_FEATURE_STORE_H_
#define INTEREST_FEATURE_STORE_H_

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "interest/ranker.h"

namespace interest {

struct FeatureVector {
  ImageId id;
  // Relative to the directory of the feature file it was loaded from.
  std::string path;
  Eigen::VectorXd features;
};

// Image feature vectors in capture (insertion) order with O(1) id lookup. All
// vectors share one dimension and have non-zero norm.
class FeatureStore {
 public:
  FeatureStore() = default;
  explicit FeatureStore(std::filesystem::path base_dir)
      : base_dir_(std::move(base_dir)) {}

  // Throws InvalidArgumentError on duplicate id, dimension mismatch,
  // non-finite values or zero norm.
  void Add(FeatureVector record);

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  // Undefined until the first insert.
  std::optional<Eigen::Index> dim() const;

  const FeatureVector& at(std::size_t index) const { return records_.at(index); }
  const FeatureVector* Find(std::string_view id) const;
  std::optional<std::size_t> IndexOf(std::string_view id) const;
  std::vector<ImageId> ids() const;

  const std::filesystem::path& base_dir() const { return base_dir_; }
  std::filesystem::path ResolvePath(const FeatureVector& record) const {
    return base_dir_ / record.path;
  }

  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }

 private:
  std::filesystem::path base_dir_;
  std::vector<FeatureVector> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Loads a feature file. `*.json` is read as the header of a binary sidecar:
//   {"dim": D, "data": "<file>", "records": [{"id": ..., "path": ...}, ...]}
// where <file> (relative to the header) holds little-endian float32 rows.
// Anything else is line-delimited JSON, one record per line:
//   {"id": "...", "path": "...", "features": [D reals]}
// Throws LoadError naming the 1-based offending record.
FeatureStore LoadFeatures(const std::filesystem::path& path);

// Canonical line-delimited JSON form.
void WriteFeaturesJsonl(const FeatureStore& store,
                        const std::filesystem::path& path);

// Binary sidecar form: writes `header` and `<header stem>.bin` next to it.
void WriteFeaturesBinary(const FeatureStore& store,
                         const std::filesystem::path& header);

// 1 - cosine similarity, in [0, 2]. Throws NumericalError on a zero-norm
// input and InvalidArgumentError on a dimension mismatch.
double CosineDistance(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b);

struct KernelConfig {
  double length_scale = 1.0;
  // Initial diagonal regularizer for the GP factorization.
  double jitter = 1e-8;

  void Validate() const;
};

// exp(-CosineDistance(a, b) / (2 l^2)); lies in [exp(-1 / l^2), 1].
double KernelValue(const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b,
                   const KernelConfig& cfg);

// Kernel on unit vectors, where cosine distance is |a - b|^2 / 2.
inline double UnitKernelValue(const Eigen::Ref<const Eigen::VectorXd>& a,
                              const Eigen::Ref<const Eigen::VectorXd>& b,
                              double length_scale) {
  const double d = 0.5 * (a - b).squaredNorm();
  return std::exp(-d / (2.0 * length_scale * length_scale));
}

}  // namespace interest

#endif  // INTEREST_FEATURE_STORE_H_
