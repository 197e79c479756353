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

#ifndef INTEREST_TESTS_SUPPORT_ORACLES_H_
#define INTEREST_TESTS_SUPPORT_ORACLES_H_

// Reference computations used only by tests. None of these call into the
// code paths they are used to check.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "interest/ranker.h"

namespace interest::testing {

struct MarginalEstimate {
  std::vector<double> means;
  std::vector<double> variances;
  std::size_t accepted = 0;
  std::size_t proposed = 0;
};

// Exact-model Monte Carlo: w ~ prior, and for every comparison
// t ~ N(w_winner - w_loser, 2 beta^2); the joint draw is kept only when every
// t is positive. Runs until `accepted` samples are kept.
MarginalEstimate RejectionSamplePosterior(std::span<const Comparison> comparisons,
                                          std::span<const ImageId> ids,
                                          const PriorConfig& prior,
                                          std::size_t accepted, std::uint64_t seed);

// v and w by adaptive quadrature of a unit Gaussian centred at t truncated to
// (0, inf): mean = t + v, variance = 1 - w.
struct QuadratureMoments {
  double v;
  double w;
};
QuadratureMoments TruncationByQuadrature(double t);

// GP posterior by explicitly inverting K + diag(noise) + jitter I, with the
// kernel computed from 1 - cosine similarity.
struct DenseGpResult {
  double mean;
  double variance;
};
DenseGpResult DenseGpPredict(const std::vector<Eigen::VectorXd>& train,
                             const Eigen::VectorXd& observed,
                             const Eigen::VectorXd& noise, double jitter,
                             double length_scale, const Eigen::VectorXd& query);

// The greedy spacing rule, phrased as repeated argmax over the still-feasible
// candidates.
std::vector<std::size_t> GreedySpacedByArgmax(std::span<const double> scores,
                                              std::size_t n, std::size_t d);

// Every subset of indices with pairwise gap >= d and size <= n, as bitmasks.
std::vector<std::uint32_t> FeasibleSpacedSubsets(std::size_t count, std::size_t n,
                                                 std::size_t d);

// Exhaustive k = 2 medoid search minimising the summed distance to the
// nearer medoid. Returns the pair in increasing order.
std::pair<std::size_t, std::size_t> ExhaustiveTwoMedoids(const Eigen::MatrixXd& d);

// Textbook O(n^3) average linkage: repeatedly merge the closest pair of
// clusters, with linkage recomputed from the raw point distances.
std::vector<std::vector<std::size_t>> NaiveAverageLinkage(const Eigen::MatrixXd& d,
                                                          std::size_t k);

}  // namespace interest::testing

#endif  // INTEREST_TESTS_SUPPORT_ORACLES_H_
