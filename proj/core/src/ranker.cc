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

#include "interest/ranker.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "interest/errors.h"
#include "interest/gaussian.h"

namespace interest {

namespace {

Gaussian1D Damp(const Gaussian1D& fresh, const Gaussian1D& previous,
                double damping) {
  if (damping == 1.0) return fresh;
  return Gaussian1D::FromNatural(
      damping * fresh.precision() + (1.0 - damping) * previous.precision(),
      damping * fresh.precision_mean() +
          (1.0 - damping) * previous.precision_mean());
}

}  // namespace

void PriorConfig::Validate() const {
  if (!std::isfinite(prior_mean)) {
    throw InvalidArgumentError("PriorConfig: prior_mean must be finite");
  }
  if (!(prior_sigma > 0.0) || !std::isfinite(prior_sigma)) {
    throw InvalidArgumentError("PriorConfig: prior_sigma must be > 0");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidArgumentError("PriorConfig: beta must be > 0");
  }
}

void EpOptions::Validate() const {
  if (!(tolerance > 0.0)) {
    throw InvalidArgumentError("EpOptions: tolerance must be > 0");
  }
  if (max_iterations < 1) {
    throw InvalidArgumentError("EpOptions: max_iterations must be >= 1");
  }
  if (!(damping > 0.0 && damping <= 1.0)) {
    throw InvalidArgumentError("EpOptions: damping must lie in (0, 1]");
  }
}

std::optional<std::size_t> InterestPosterior::IndexOf(
    std::string_view id) const {
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ids.begin());
}

namespace {

struct IndexedFactor {
  std::size_t winner;
  std::size_t loser;
};

double MaxChange(const std::vector<double>& means, const std::vector<double>& vars,
                 const std::vector<double>& old_means,
                 const std::vector<double>& old_vars) {
  double out = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    out = std::max({out, std::abs(means[i] - old_means[i]),
                    std::abs(vars[i] - old_vars[i])});
  }
  return out;
}

void RunFactorized(const std::vector<IndexedFactor>& indexed, const PriorConfig& prior,
                   const EpOptions& options, InterestPosterior& result) {
  struct FactorState {
    Gaussian1D to_winner;
    Gaussian1D to_loser;
  };
  std::vector<FactorState> factors(indexed.size());
  const Gaussian1D prior_msg = Gaussian1D::FromMoments(
      prior.prior_mean, prior.prior_sigma * prior.prior_sigma);
  std::vector<Gaussian1D> marginals(result.size(), prior_msg);
  const double performance_variance = 2.0 * prior.beta * prior.beta;

  for (int sweep = 1; sweep <= options.max_iterations; ++sweep) {
    const std::vector<double> old_means = result.means;
    const std::vector<double> old_vars = result.variances;

    for (std::size_t k = 0; k < indexed.size(); ++k) {
      FactorState& f = factors[k];
      const std::size_t w = indexed[k].winner;
      const std::size_t l = indexed[k].loser;
      const Gaussian1D cavity_w = marginals[w] / f.to_winner;
      const Gaussian1D cavity_l = marginals[l] / f.to_loser;
      const Moments mw = cavity_w.ToMoments();
      const Moments ml = cavity_l.ToMoments();

      const double c2 = mw.variance + ml.variance + performance_variance;
      const double c = std::sqrt(c2);
      const TruncationCorrection tc = TruncationMoments((mw.mean - ml.mean) / c);

      const Gaussian1D post_w = Gaussian1D::FromMoments(
          mw.mean + mw.variance / c * tc.v,
          mw.variance * (1.0 - mw.variance / c2 * tc.w));
      const Gaussian1D post_l = Gaussian1D::FromMoments(
          ml.mean - ml.variance / c * tc.v,
          ml.variance * (1.0 - ml.variance / c2 * tc.w));

      f.to_winner = Damp(post_w / cavity_w, f.to_winner, options.damping);
      f.to_loser = Damp(post_l / cavity_l, f.to_loser, options.damping);
      marginals[w] = cavity_w * f.to_winner;
      marginals[l] = cavity_l * f.to_loser;
    }

    for (std::size_t i = 0; i < marginals.size(); ++i) {
      result.means[i] = marginals[i].mean();
      result.variances[i] = marginals[i].variance();
    }
    result.iterations = sweep;
    if (MaxChange(result.means, result.variances, old_means, old_vars) <
        options.tolerance) {
      result.converged = true;
      return;
    }
  }
}

// Sites are Gaussians in s = w_winner - w_loser with natural parameters
// (tau, nu). The posterior is kept as a dense covariance over the compared
// images, updated by a rank-one correction per site and rebuilt from the
// precision after every sweep so rounding cannot accumulate.
void RunJoint(const std::vector<IndexedFactor>& indexed, const PriorConfig& prior,
              const EpOptions& options, InterestPosterior& result) {
  std::vector<std::size_t> compact(result.size(), SIZE_MAX);
  std::vector<std::size_t> members;
  for (const IndexedFactor& f : indexed) {
    for (std::size_t i : {f.winner, f.loser}) {
      if (compact[i] == SIZE_MAX) {
        compact[i] = members.size();
        members.push_back(i);
      }
    }
  }
  const Eigen::Index n = static_cast<Eigen::Index>(members.size());
  const double prior_var = prior.prior_sigma * prior.prior_sigma;
  const double performance_variance = 2.0 * prior.beta * prior.beta;

  std::vector<double> tau(indexed.size(), 0.0);
  std::vector<double> nu(indexed.size(), 0.0);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(n, n) * prior_var;
  Eigen::VectorXd mean = Eigen::VectorXd::Constant(n, prior.prior_mean);
  Eigen::VectorXd u(n);

  const auto rebuild = [&] {
    Eigen::MatrixXd precision = Eigen::MatrixXd::Identity(n, n) / prior_var;
    Eigen::VectorXd shift = Eigen::VectorXd::Constant(n, prior.prior_mean / prior_var);
    for (std::size_t k = 0; k < indexed.size(); ++k) {
      const Eigen::Index w = static_cast<Eigen::Index>(compact[indexed[k].winner]);
      const Eigen::Index l = static_cast<Eigen::Index>(compact[indexed[k].loser]);
      precision(w, w) += tau[k];
      precision(l, l) += tau[k];
      precision(w, l) -= tau[k];
      precision(l, w) -= tau[k];
      shift[w] += nu[k];
      shift[l] -= nu[k];
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("InferEp: posterior precision is not positive definite");
    }
    cov = llt.solve(Eigen::MatrixXd::Identity(n, n));
    mean = cov * shift;
  };

  std::vector<double> means(members.size()), vars(members.size());
  for (int sweep = 1; sweep <= options.max_iterations; ++sweep) {
    for (std::size_t k = 0; k < indexed.size(); ++k) {
      const Eigen::Index w = static_cast<Eigen::Index>(compact[indexed[k].winner]);
      const Eigen::Index l = static_cast<Eigen::Index>(compact[indexed[k].loser]);
      u = cov.col(w) - cov.col(l);
      const double s_var = u[w] - u[l];
      const double s_mean = mean[w] - mean[l];

      const double cavity_prec = 1.0 / s_var - tau[k];
      if (!(cavity_prec > 0.0)) continue;  // rounding; retry next sweep
      const double cavity_var = 1.0 / cavity_prec;
      const double cavity_mean = cavity_var * (s_mean / s_var - nu[k]);

      const double c2 = cavity_var + performance_variance;
      const double c = std::sqrt(c2);
      const TruncationCorrection tc = TruncationMoments(cavity_mean / c);
      const double tilted_mean = cavity_mean + cavity_var / c * tc.v;
      const double tilted_var = cavity_var * (1.0 - cavity_var / c2 * tc.w);

      const double fresh_tau = 1.0 / tilted_var - cavity_prec;
      const double fresh_nu = tilted_mean / tilted_var - cavity_mean * cavity_prec;
      const double new_tau = options.damping * fresh_tau + (1.0 - options.damping) * tau[k];
      const double new_nu = options.damping * fresh_nu + (1.0 - options.damping) * nu[k];
      const double d_tau = new_tau - tau[k];
      const double d_nu = new_nu - nu[k];
      tau[k] = new_tau;
      nu[k] = new_nu;

      const double denom = 1.0 + d_tau * s_var;
      mean += u * ((d_nu - d_tau * s_mean) / denom);
      cov.noalias() -= (d_tau / denom) * u * u.transpose();
    }
    rebuild();

    for (std::size_t m = 0; m < members.size(); ++m) {
      const Eigen::Index e = static_cast<Eigen::Index>(m);
      means[m] = mean[e];
      vars[m] = cov(e, e);
    }
    const std::vector<double> old_means = result.means;
    const std::vector<double> old_vars = result.variances;
    for (std::size_t m = 0; m < members.size(); ++m) {
      result.means[members[m]] = means[m];
      result.variances[members[m]] = vars[m];
    }
    result.iterations = sweep;
    if (MaxChange(result.means, result.variances, old_means, old_vars) <
        options.tolerance) {
      result.converged = true;
      return;
    }
  }
}

}  // namespace

InterestPosterior InferEp(std::span<const Comparison> comparisons,
                          std::span<const ImageId> image_ids,
                          const PriorConfig& prior, const EpOptions& options) {
  prior.Validate();
  options.Validate();

  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(image_ids.size());
  for (std::size_t i = 0; i < image_ids.size(); ++i) {
    if (!index.emplace(image_ids[i], i).second) {
      throw InvalidArgumentError("InferEp: duplicate image id '" +
                                 image_ids[i] + "'");
    }
  }

  const auto lookup = [&](const ImageId& id, std::size_t k) {
    auto it = index.find(id);
    if (it == index.end()) {
      throw InvalidArgumentError("InferEp: comparison " + std::to_string(k) +
                                 " references unknown image id '" + id + "'");
    }
    return it->second;
  };

  std::vector<IndexedFactor> factors;
  factors.reserve(comparisons.size());
  for (std::size_t k = 0; k < comparisons.size(); ++k) {
    const Comparison& c = comparisons[k];
    if (c.winner_id == c.loser_id) {
      throw InvalidArgumentError("InferEp: comparison " + std::to_string(k) +
                                 " pits image '" + c.winner_id +
                                 "' against itself");
    }
    factors.push_back({lookup(c.winner_id, k), lookup(c.loser_id, k)});
  }

  InterestPosterior result;
  result.ids.assign(image_ids.begin(), image_ids.end());
  result.means.assign(image_ids.size(), prior.prior_mean);
  result.variances.assign(image_ids.size(), prior.prior_sigma * prior.prior_sigma);
  if (factors.empty()) {
    result.converged = true;
    result.iterations = 1;
    return result;
  }
  bool joint = options.approximation == EpApproximation::kJoint;
  if (options.approximation == EpApproximation::kAuto) {
    std::vector<bool> seen(image_ids.size(), false);
    std::size_t compared = 0;
    for (const IndexedFactor& f : factors) {
      for (std::size_t i : {f.winner, f.loser}) {
        if (!seen[i]) {
          seen[i] = true;
          ++compared;
        }
      }
    }
    joint = compared <= options.joint_max_images;
  }
  if (joint) {
    RunJoint(factors, prior, options, result);
  } else {
    RunFactorized(factors, prior, options, result);
  }
  return result;
}

double PredictOutcome(const InterestPosterior& posterior, std::string_view i,
                      std::string_view j, double beta) {
  const auto a = posterior.IndexOf(i);
  const auto b = posterior.IndexOf(j);
  if (!a || !b) {
    throw InvalidArgumentError("PredictOutcome: unknown image id '" +
                               std::string(a ? j : i) + "'");
  }
  const double scale =
      std::sqrt(posterior.variances[*a] + posterior.variances[*b] +
                2.0 * beta * beta);
  const double z = (posterior.means[*a] - posterior.means[*b]) / scale;
  // Evaluate on the non-negative side so that p(i, j) + p(j, i) sums to one
  // without rounding: Phi(|z|) lies in [0.5, 1] and 1 - Phi(|z|) is exact.
  const double upper = NormalCdf(std::abs(z));
  return z >= 0.0 ? upper : 1.0 - upper;
}

}  // namespace interest
