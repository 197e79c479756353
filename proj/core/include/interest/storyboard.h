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

#ifndef INTEREST_STORYBOARD_H_
#define INTEREST_STORYBOARD_H_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "interest/feature_store.h"
#include "interest/pipeline.h"
#include "interest/ranker.h"

namespace interest {

struct StoryboardSpec {
  std::size_t n_images = 24;
  // Minimum capture-index gap between any two selected images.
  std::size_t min_separation = 0;

  void Validate() const;
};

struct StoryboardSelection {
  // Sorted by capture order.
  std::vector<ImageId> ids;
  // Fewer than n_images candidates satisfied the spacing rule.
  bool short_of_target = false;
};

// Greedy selection: visit images by descending score (earlier capture index
// first on ties) and accept each one whose capture index is at least
// min_separation away from everything accepted so far.
std::vector<std::size_t> SelectTopSpacedIndices(std::span<const double> scores,
                                                const StoryboardSpec& spec);

// Throws InvalidArgumentError when an image in capture_order has no score.
StoryboardSelection SelectTopSpaced(const ScoreMap& scores,
                                    std::span<const ImageId> capture_order,
                                    const StoryboardSpec& spec);

// Average-linkage agglomerative clustering of the given distance matrix down
// to `n_clusters`. Returns a cluster label per point; labels are numbered by
// the smallest member index, in increasing order.
std::vector<std::size_t> AverageLinkageLabels(const Eigen::MatrixXd& distances,
                                              std::size_t n_clusters);

// Medoid of each labelled cluster (minimum summed distance, smallest index on
// ties), in increasing index order.
std::vector<std::size_t> ClusterMedoids(const Eigen::MatrixXd& distances,
                                        std::span<const std::size_t> labels);

Eigen::MatrixXd CosineDistanceMatrix(const FeatureStore& store);

// Unsupervised baseline: average-linkage clustering on cosine distance, one
// medoid per cluster, in capture order. Throws InvalidArgumentError when
// n_images is zero or exceeds the store size.
std::vector<ImageId> ClusterBaseline(const FeatureStore& store,
                                     std::size_t n_images);

// [{id, path, score, capture_index}, ...]; score is null when `scores` has
// no entry (or is null).
nlohmann::json StoryboardManifest(const FeatureStore& store,
                                  std::span<const ImageId> ids,
                                  const ScoreMap* scores);

}  // namespace interest

#endif  // INTEREST_STORYBOARD_H_
