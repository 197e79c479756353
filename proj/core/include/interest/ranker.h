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

#ifndef INTEREST_RANKER_H_
#define INTEREST_RANKER_H_

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace interest {

using ImageId = std::string;

// One operator judgment: `winner_id` was preferred over `loser_id`.
struct Comparison {
  ImageId winner_id;
  ImageId loser_id;
  std::chrono::system_clock::time_point timestamp{};
  std::string session_id;
  // Optional client-generated key; a retried submission with the same key is
  // recorded once.
  std::string judgment_id;

  friend bool operator==(const Comparison&, const Comparison&) = default;
};

// Gaussian prior over each image's interest plus the per-image performance
// noise. A comparison is decided by the sign of
//   t ~ N(w_winner - w_loser, 2 * beta^2).
struct PriorConfig {
  double prior_mean = 0.0;
  double prior_sigma = 2.0;
  double beta = 1.0;

  // Throws InvalidArgumentError unless prior_sigma > 0 and beta > 0.
  void Validate() const;
};

enum class EpApproximation {
  // Gaussian over all compared images jointly; sites live on the winner -
  // loser difference. O(n^2) per comparison update. Only the diagonal is
  // reported.
  kJoint,
  // Fully factorized per-image messages (classic TrueSkill). O(1) per update,
  // but ignores correlations and understates variances when the same images
  // meet repeatedly.
  kFactorized,
  // kJoint while at most EpOptions::joint_max_images images are compared,
  // kFactorized beyond.
  kAuto,
};

struct EpOptions {
  double tolerance = 1e-4;
  int max_iterations = 100;
  // 1.0 replaces each factor message (site) outright; smaller values blend
  // the new one with the previous one in natural parameters.
  double damping = 1.0;
  EpApproximation approximation = EpApproximation::kAuto;
  std::size_t joint_max_images = 1000;

  void Validate() const;
};

// Per-image marginals. The three vectors are parallel to `ids`.
struct InterestPosterior {
  std::vector<ImageId> ids;
  std::vector<double> means;
  std::vector<double> variances;
  bool converged = false;
  int iterations = 0;

  std::size_t size() const { return ids.size(); }
  std::optional<std::size_t> IndexOf(std::string_view id) const;
};

// Expectation propagation over the comparison factor graph. Sweeps the
// comparisons in list order until no marginal mean or variance moves by more
// than `options.tolerance` over a full sweep. Images without comparisons keep
// the prior exactly. Hitting `max_iterations` is not
// an error: the last sweep's marginals come back with converged = false.
//
// Throws InvalidArgumentError for unknown or self-referencing ids, duplicated
// image ids, or invalid configuration.
InterestPosterior InferEp(std::span<const Comparison> comparisons,
                          std::span<const ImageId> image_ids,
                          const PriorConfig& prior,
                          const EpOptions& options = {});

// P(i beats j) = Phi((mu_i - mu_j) / sqrt(var_i + var_j + 2 beta^2)).
// PredictOutcome(i, j) + PredictOutcome(j, i) == 1 exactly.
double PredictOutcome(const InterestPosterior& posterior, std::string_view i,
                      std::string_view j, double beta);

}  // namespace interest

#endif  // INTEREST_RANKER_H_
