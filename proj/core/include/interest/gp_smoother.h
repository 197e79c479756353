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

#ifndef INTEREST_GP_SMOOTHER_H_
#define INTEREST_GP_SMOOTHER_H_

#include <cstddef>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "interest/feature_store.h"
#include "interest/ranker.h"

namespace interest {

struct GpPrediction {
  double mean = 0.0;
  double variance = 1.0;
  // Set when the raw variance fell below -1e-8 before clamping to zero.
  bool variance_clamped = false;
};

// Zero-mean GP over interest with the cosine RBF kernel, conditioned on EP
// marginal means observed under heteroscedastic noise (the EP variances).
// Immutable after Fit; Predict is safe for concurrent callers.
class GpModel {
 public:
  // Prior-only model: every prediction is (0, 1).
  GpModel() = default;

  // Factorizes K + Sigma + jitter * I. Jitter starts at cfg.jitter and grows
  // tenfold up to 1e-2 on failure; throws NumericalError reporting the last
  // value tried. Throws InvalidArgumentError when a posterior id has no
  // feature vector or a noise variance is not strictly positive.
  static GpModel Fit(const FeatureStore& features,
                     const InterestPosterior& posterior,
                     const KernelConfig& cfg = {});

  // Throws InvalidArgumentError on a dimension mismatch (for a non-empty
  // model) and NumericalError on a zero-norm query.
  GpPrediction Predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  // Smoothed marginals for the training images, in training order.
  InterestPosterior SmoothAll() const;

  std::size_t size() const { return ids_.size(); }
  const std::vector<ImageId>& training_ids() const { return ids_; }
  const Eigen::VectorXd& observed_means() const { return observed_; }
  const Eigen::VectorXd& noise_diag() const { return noise_; }
  // Unit-normalized training features, one per row.
  const Eigen::MatrixXd& train_features() const { return train_; }
  const KernelConfig& kernel() const { return cfg_; }
  double jitter_used() const { return jitter_; }

 private:
  Eigen::VectorXd KernelColumn(const Eigen::VectorXd& unit_x) const;

  std::vector<ImageId> ids_;
  Eigen::MatrixXd train_;
  Eigen::VectorXd observed_;
  Eigen::VectorXd noise_;
  KernelConfig cfg_;
  double jitter_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  // [K + Sigma + jitter I]^-1 w_m
  Eigen::VectorXd weights_;
};

// Cosine-RBF Gram matrix over unit-normalized rows.
Eigen::MatrixXd KernelMatrix(const Eigen::MatrixXd& unit_rows,
                             double length_scale);

}  // namespace interest

#endif  // INTEREST_GP_SMOOTHER_H_
