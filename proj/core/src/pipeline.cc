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

#include "interest/pipeline.h"

#include <unordered_set>

namespace interest {

InterestPosterior RankTrueSkill(const FeatureStore& store,
                                std::span<const Comparison> comparisons,
                                const PipelineConfig& cfg) {
  const std::vector<ImageId> ids = store.ids();
  return InferEp(comparisons, ids, cfg.prior, cfg.ep);
}

SmoothedInterest RankGpCnn(const FeatureStore& store,
                           std::span<const Comparison> comparisons,
                           const PipelineConfig& cfg) {
  std::unordered_set<std::string_view> seen;
  for (const Comparison& c : comparisons) {
    seen.insert(c.winner_id);
    seen.insert(c.loser_id);
  }
  std::vector<ImageId> compared;
  for (const FeatureVector& fv : store) {
    if (seen.contains(fv.id)) compared.push_back(fv.id);
  }

  SmoothedInterest out;
  out.ep = InferEp(comparisons, compared, cfg.prior, cfg.ep);
  out.model = GpModel::Fit(store, out.ep, cfg.kernel);
  out.scores.converged = out.ep.converged;
  out.scores.iterations = out.ep.iterations;
  out.scores.ids.reserve(store.size());
  for (const FeatureVector& fv : store) {
    const GpPrediction p = out.model.Predict(fv.features);
    out.scores.ids.push_back(fv.id);
    out.scores.means.push_back(p.mean);
    out.scores.variances.push_back(p.variance);
  }
  return out;
}

ScoreMap ToScoreMap(const InterestPosterior& posterior) {
  ScoreMap out;
  out.reserve(posterior.size());
  for (std::size_t i = 0; i < posterior.size(); ++i) {
    out.emplace(posterior.ids[i], posterior.means[i]);
  }
  return out;
}

}  // namespace interest
