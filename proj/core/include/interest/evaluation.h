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

#ifndef INTEREST_EVALUATION_H_
#define INTEREST_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "interest/feature_store.h"
#include "interest/pipeline.h"
#include "interest/ranker.h"

namespace interest {

struct SplitConfig {
  double train_fraction = 2.0 / 3.0;
  std::uint64_t seed = 0;
};

struct ComparisonSplit {
  // Shuffled by the split seed; prefixes of `train` are the nested budgets.
  std::vector<Comparison> train;
  std::vector<Comparison> test;
};

// |train| = round(train_fraction * N). Throws InvalidArgumentError on an
// empty list or a fraction outside (0, 1].
ComparisonSplit SplitComparisons(std::span<const Comparison> all,
                                 const SplitConfig& cfg);

// Fraction of comparisons whose winner scores strictly higher than the loser.
// Exact ties count as wrong. An empty test set scores 0. Throws
// InvalidArgumentError when an id has no score.
double PredictionAccuracy(const ScoreMap& scores,
                          std::span<const Comparison> test);

struct SyntheticOptions {
  std::size_t n_images = 500;
  std::size_t dim = 64;
  std::size_t n_comparisons = 4000;
  double noise_std = 0.5;
  std::uint64_t seed = 0;
  std::size_t n_clusters = 8;
  // Within-cluster scatter relative to the unit-norm cluster centre.
  double cluster_spread = 0.5;
  // Standard deviation of the true interest across images.
  double interest_gain = 1.5;
};

struct SyntheticDataset {
  FeatureStore features;
  std::vector<double> true_interest;  // parallel to features
  std::vector<Comparison> comparisons;
  std::uint64_t seed = 0;
};

// Features cluster around a few random directions; true interest is a fixed
// random linear functional of the unit-normalized feature vector; each
// comparison is a uniform random pair judged by
//   sign(w_i - w_j + N(0, noise_std^2)).
// Throws InvalidArgumentError unless n_images >= 2, dim >= 2, n_clusters >= 1
// and noise_std >= 0.
SyntheticDataset SynthesizeDataset(const SyntheticOptions& options);

ScoreMap TrueScores(const SyntheticDataset& dataset);

enum class Method { kTrueSkill, kGpCnn };

std::string MethodLabel(Method method);

struct MethodTrace {
  Method method;
  std::vector<double> accuracies;  // parallel to AccuracyTrace::budgets
};

struct AccuracyTrace {
  std::vector<std::size_t> budgets;
  std::vector<MethodTrace> methods;
  std::uint64_t seed = 0;

  const MethodTrace& For(Method method) const;
};

// For every budget b, ranks with the first b training comparisons and scores
// the held-out test set. Throws InvalidArgumentError when budgets are not
// strictly increasing or exceed the training set.
AccuracyTrace ComputeAccuracyTrace(const SyntheticDataset& dataset,
                                   const SplitConfig& split,
                                   std::span<const std::size_t> budgets,
                                   std::span<const Method> methods,
                                   const PipelineConfig& cfg = {});

// Pointwise mean over traces that share budgets and methods.
AccuracyTrace MeanTrace(std::span<const AccuracyTrace> traces);

// CSV rows: method,budget,accuracy,seed (with a header line).
void WriteTraceCsv(std::span<const AccuracyTrace> traces, std::ostream& out);
nlohmann::json TraceSummaryJson(std::span<const AccuracyTrace> traces);

}  // namespace interest

#endif  // INTEREST_EVALUATION_H_
