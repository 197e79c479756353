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

#ifndef INTEREST_PIPELINE_H_
#define INTEREST_PIPELINE_H_

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "interest/feature_store.h"
#include "interest/gp_smoother.h"
#include "interest/ranker.h"

namespace interest {

struct PipelineConfig {
  PriorConfig prior;
  EpOptions ep;
  KernelConfig kernel;
};

using ScoreMap = std::unordered_map<ImageId, double>;

// EP over every image in the store. Never-compared images keep the prior.
InterestPosterior RankTrueSkill(const FeatureStore& store,
                                std::span<const Comparison> comparisons,
                                const PipelineConfig& cfg);

struct SmoothedInterest {
  // EP marginals of the images that appear in at least one comparison, in
  // store order. These are the GP training observations.
  InterestPosterior ep;
  GpModel model;
  // GP predictions for every image in the store, in store order.
  InterestPosterior scores;
};

// EP followed by GP smoothing. Only compared images become GP observations;
// an uncompared image's EP marginal is just the prior and would count the
// prior twice.
SmoothedInterest RankGpCnn(const FeatureStore& store,
                           std::span<const Comparison> comparisons,
                           const PipelineConfig& cfg);

ScoreMap ToScoreMap(const InterestPosterior& posterior);

}  // namespace interest

#endif  // INTEREST_PIPELINE_H_
