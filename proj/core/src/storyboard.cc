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

#include "interest/storyboard.h"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "interest/errors.h"

namespace interest {

namespace {

struct Merge {
  std::size_t a;
  std::size_t b;
  double height;
};

std::size_t FindRoot(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

// Full average-linkage dendrogram by the nearest-neighbour chain algorithm.
// Merge slots keep the smaller index as the cluster representative.
std::vector<Merge> AverageLinkageDendrogram(Eigen::MatrixXd d) {
  const std::size_t n = static_cast<std::size_t>(d.rows());
  std::vector<bool> active(n, true);
  std::vector<double> size(n, 1.0);
  std::vector<Merge> merges;
  merges.reserve(n > 0 ? n - 1 : 0);
  std::vector<std::size_t> chain;

  const auto dist = [&](std::size_t i, std::size_t j) {
    return d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };

  std::size_t remaining = n;
  while (remaining > 1) {
    if (chain.empty()) {
      std::size_t first = 0;
      while (!active[first]) ++first;
      chain.push_back(first);
    }
    const std::size_t top = chain.back();
    const std::size_t prev =
        chain.size() >= 2 ? chain[chain.size() - 2] : std::numeric_limits<std::size_t>::max();
    std::size_t best = prev;
    double best_d = prev != std::numeric_limits<std::size_t>::max()
                        ? dist(top, prev)
                        : std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == top || k == prev) continue;
      const double dk = dist(top, k);
      if (dk < best_d || (dk == best_d && best != prev && k < best)) {
        best = k;
        best_d = dk;
      }
    }
    if (best != prev) {
      chain.push_back(best);
      continue;
    }

    chain.pop_back();
    chain.pop_back();
    const std::size_t keep = std::min(top, prev);
    const std::size_t drop = std::max(top, prev);
    merges.push_back({keep, drop, best_d});
    const double nk = size[keep];
    const double nd = size[drop];
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == keep || k == drop) continue;
      const double updated = (nk * dist(keep, k) + nd * dist(drop, k)) / (nk + nd);
      d(static_cast<Eigen::Index>(keep), static_cast<Eigen::Index>(k)) = updated;
      d(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(keep)) = updated;
    }
    size[keep] = nk + nd;
    active[drop] = false;
    --remaining;
  }
  return merges;
}

}  // namespace

void StoryboardSpec::Validate() const {
  if (n_images < 1) {
    throw InvalidArgumentError("StoryboardSpec: n_images must be >= 1");
  }
}

std::vector<std::size_t> SelectTopSpacedIndices(std::span<const double> scores,
                                                const StoryboardSpec& spec) {
  spec.Validate();
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  std::vector<std::size_t> accepted;
  for (std::size_t candidate : order) {
    if (accepted.size() == spec.n_images) break;
    const bool spaced = std::all_of(
        accepted.begin(), accepted.end(), [&](std::size_t a) {
          const std::size_t gap = a > candidate ? a - candidate : candidate - a;
          return gap >= spec.min_separation;
        });
    if (spaced) accepted.push_back(candidate);
  }
  std::sort(accepted.begin(), accepted.end());
  return accepted;
}

StoryboardSelection SelectTopSpaced(const ScoreMap& scores,
                                    std::span<const ImageId> capture_order,
                                    const StoryboardSpec& spec) {
  std::vector<double> by_index;
  by_index.reserve(capture_order.size());
  for (const ImageId& id : capture_order) {
    auto it = scores.find(id);
    if (it == scores.end()) {
      throw InvalidArgumentError("SelectTopSpaced: no score for image '" + id + "'");
    }
    by_index.push_back(it->second);
  }
  StoryboardSelection out;
  for (std::size_t idx : SelectTopSpacedIndices(by_index, spec)) {
    out.ids.push_back(capture_order[idx]);
  }
  out.short_of_target = out.ids.size() < spec.n_images;
  return out;
}

std::vector<std::size_t> AverageLinkageLabels(const Eigen::MatrixXd& distances,
                                              std::size_t n_clusters) {
  const std::size_t n = static_cast<std::size_t>(distances.rows());
  if (distances.rows() != distances.cols()) {
    throw InvalidArgumentError("AverageLinkageLabels: distance matrix not square");
  }
  if (n_clusters < 1 || n_clusters > n) {
    throw InvalidArgumentError("AverageLinkageLabels: need 1 <= clusters <= " +
                               std::to_string(n));
  }
  std::vector<Merge> merges = AverageLinkageDendrogram(distances);
  // Average linkage has no inversions, so the lowest n - k merges form the
  // k-cluster cut regardless of the order the chain discovered them.
  std::stable_sort(merges.begin(), merges.end(),
                   [](const Merge& x, const Merge& y) { return x.height < y.height; });
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t m = 0; m < n - n_clusters; ++m) {
    const std::size_t ra = FindRoot(parent, merges[m].a);
    const std::size_t rb = FindRoot(parent, merges[m].b);
    parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<std::size_t> labels(n);
  std::vector<std::size_t> label_of_root(n, std::numeric_limits<std::size_t>::max());
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = FindRoot(parent, i);
    if (label_of_root[r] == std::numeric_limits<std::size_t>::max()) {
      label_of_root[r] = next++;
    }
    labels[i] = label_of_root[r];
  }
  return labels;
}

std::vector<std::size_t> ClusterMedoids(const Eigen::MatrixXd& distances,
                                        std::span<const std::size_t> labels) {
  const std::size_t n_labels =
      labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<std::size_t>> members(n_labels);
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);

  std::vector<std::size_t> medoids;
  for (const auto& group : members) {
    if (group.empty()) continue;
    std::size_t best = group.front();
    double best_sum = std::numeric_limits<double>::infinity();
    for (std::size_t candidate : group) {
      double sum = 0.0;
      for (std::size_t other : group) {
        sum += distances(static_cast<Eigen::Index>(candidate),
                         static_cast<Eigen::Index>(other));
      }
      if (sum < best_sum) {
        best_sum = sum;
        best = candidate;
      }
    }
    medoids.push_back(best);
  }
  std::sort(medoids.begin(), medoids.end());
  return medoids;
}

Eigen::MatrixXd CosineDistanceMatrix(const FeatureStore& store) {
  const auto n = static_cast<Eigen::Index>(store.size());
  if (n == 0) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd unit(n, *store.dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& f = store.at(static_cast<std::size_t>(i)).features;
    unit.row(i) = f.transpose() / f.norm();
  }
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    d(j, j) = 0.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = std::clamp(0.5 * (unit.row(i) - unit.row(j)).squaredNorm(), 0.0, 2.0);
      d(i, j) = d(j, i) = v;
    }
  }
  return d;
}

std::vector<ImageId> ClusterBaseline(const FeatureStore& store,
                                     std::size_t n_images) {
  if (n_images < 1 || n_images > store.size()) {
    throw InvalidArgumentError("ClusterBaseline: n_images must lie in [1, " +
                               std::to_string(store.size()) + "]");
  }
  const Eigen::MatrixXd d = CosineDistanceMatrix(store);
  const std::vector<std::size_t> labels = AverageLinkageLabels(d, n_images);
  std::vector<ImageId> out;
  for (std::size_t idx : ClusterMedoids(d, labels)) out.push_back(store.at(idx).id);
  return out;
}

nlohmann::json StoryboardManifest(const FeatureStore& store,
                                  std::span<const ImageId> ids,
                                  const ScoreMap* scores) {
  nlohmann::json out = nlohmann::json::array();
  for (const ImageId& id : ids) {
    const auto idx = store.IndexOf(id);
    if (!idx) {
      throw InvalidArgumentError("StoryboardManifest: unknown image '" + id + "'");
    }
    nlohmann::json entry = {{"id", id},
                            {"path", store.at(*idx).path},
                            {"score", nullptr},
                            {"capture_index", *idx}};
    if (scores != nullptr) {
      if (auto it = scores->find(id); it != scores->end()) entry["score"] = it->second;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace interest
