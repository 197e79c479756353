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

#include "interest/gp_smoother.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "interest/errors.h"

namespace interest {

namespace {

constexpr double kMaxJitter = 1e-2;
constexpr double kClampReportThreshold = -1e-8;

Eigen::VectorXd Normalized(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const double n = x.norm();
  if (!(n > 0.0)) throw NumericalError("GpModel: zero-norm feature vector");
  return x / n;
}

}  // namespace

Eigen::MatrixXd KernelMatrix(const Eigen::MatrixXd& unit_rows,
                             double length_scale) {
  const Eigen::Index n = unit_rows.rows();
  // |a - b|^2 / 2 = 1 - a.b for unit vectors; the Gram product is far faster
  // than pairwise differences and the clamp keeps rounding inside [0, 2].
  const Eigen::MatrixXd gram = unit_rows * unit_rows.transpose();
  const double scale = 1.0 / (2.0 * length_scale * length_scale);
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    k(j, j) = 1.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double d = std::clamp(1.0 - gram(i, j), 0.0, 2.0);
      k(i, j) = k(j, i) = std::exp(-d * scale);
    }
  }
  return k;
}

GpModel GpModel::Fit(const FeatureStore& features,
                     const InterestPosterior& posterior,
                     const KernelConfig& cfg) {
  cfg.Validate();
  const std::size_t n = posterior.size();
  if (posterior.means.size() != n || posterior.variances.size() != n) {
    throw InvalidArgumentError("GpModel::Fit: posterior vectors differ in length");
  }

  GpModel model;
  model.cfg_ = cfg;
  model.ids_ = posterior.ids;
  model.observed_ = Eigen::Map<const Eigen::VectorXd>(posterior.means.data(),
                                                      static_cast<Eigen::Index>(n));
  model.noise_ = Eigen::Map<const Eigen::VectorXd>(posterior.variances.data(),
                                                   static_cast<Eigen::Index>(n));
  if (n == 0) {
    model.weights_.resize(0);
    return model;
  }
  if (!(model.noise_.array() > 0.0).all() || !model.noise_.allFinite() ||
      !model.observed_.allFinite()) {
    throw InvalidArgumentError(
        "GpModel::Fit: noise variances must be finite and strictly positive");
  }

  const Eigen::Index dim = *features.dim();
  model.train_.resize(static_cast<Eigen::Index>(n), dim);
  for (std::size_t i = 0; i < n; ++i) {
    const FeatureVector* fv = features.Find(posterior.ids[i]);
    if (fv == nullptr) {
      throw InvalidArgumentError("GpModel::Fit: no feature vector for image '" +
                                 posterior.ids[i] + "'");
    }
    model.train_.row(static_cast<Eigen::Index>(i)) = Normalized(fv->features);
  }

  Eigen::MatrixXd system = KernelMatrix(model.train_, cfg.length_scale);
  system.diagonal() += model.noise_;

  double jitter = cfg.jitter;
  for (;;) {
    Eigen::MatrixXd jittered = system;
    jittered.diagonal().array() += jitter;
    model.llt_.compute(jittered);
    if (model.llt_.info() == Eigen::Success) break;
    const double next = jitter == 0.0 ? 1e-10 : jitter * 10.0;
    if (next > kMaxJitter * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "GpModel::Fit: factorization of K + Sigma failed with jitter "
          << jitter;
      throw NumericalError(msg.str());
    }
    jitter = next;
  }
  model.jitter_ = jitter;
  model.weights_ = model.llt_.solve(model.observed_);
  return model;
}

Eigen::VectorXd GpModel::KernelColumn(const Eigen::VectorXd& unit_x) const {
  const double scale = 1.0 / (2.0 * cfg_.length_scale * cfg_.length_scale);
  Eigen::VectorXd dist = (1.0 - (train_ * unit_x).array()).matrix();
  return (-dist.array().max(0.0).min(2.0) * scale).exp().matrix();
}

GpPrediction GpModel::Predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (ids_.empty()) {
    Normalized(x);
    return {};
  }
  if (x.size() != train_.cols()) {
    throw InvalidArgumentError("GpModel::Predict: query dimension " +
                               std::to_string(x.size()) + " != " +
                               std::to_string(train_.cols()));
  }
  const Eigen::VectorXd k_star = KernelColumn(Normalized(x));
  GpPrediction out;
  out.mean = k_star.dot(weights_);
  const Eigen::VectorXd half = llt_.matrixL().solve(k_star);
  const double raw = 1.0 - half.squaredNorm();
  out.variance_clamped = raw < kClampReportThreshold;
  out.variance = std::max(raw, 0.0);
  return out;
}

InterestPosterior GpModel::SmoothAll() const {
  InterestPosterior out;
  out.ids = ids_;
  out.converged = true;
  out.iterations = 0;
  out.means.reserve(ids_.size());
  out.variances.reserve(ids_.size());
  for (Eigen::Index i = 0; i < train_.rows(); ++i) {
    const GpPrediction p = Predict(train_.row(i).transpose());
    out.means.push_back(p.mean);
    out.variances.push_back(p.variance);
  }
  return out;
}

}  // namespace interest
