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

#include "oracles.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/random/normal_distribution.hpp>
#include <Eigen/Dense>

namespace interest::testing {

MarginalEstimate RejectionSamplePosterior(std::span<const Comparison> comparisons,
                                          std::span<const ImageId> ids,
                                          const PriorConfig& prior,
                                          std::size_t accepted, std::uint64_t seed) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;
  std::vector<std::pair<std::size_t, std::size_t>> games;
  for (const Comparison& c : comparisons) {
    games.emplace_back(index.at(c.winner_id), index.at(c.loser_id));
  }

  std::mt19937_64 rng(seed);
  boost::random::normal_distribution<double> normal;  // ziggurat
  const double noise_sd = std::sqrt(2.0) * prior.beta;
  const std::size_t n = ids.size();
  std::vector<double> w(n);
  std::vector<double> sum(n, 0.0);
  std::vector<double> sum_sq(n, 0.0);

  MarginalEstimate out;
  while (out.accepted < accepted) {
    ++out.proposed;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = prior.prior_mean + prior.prior_sigma * normal(rng);
    }
    bool consistent = true;
    for (const auto& [winner, loser] : games) {
      const double t = w[winner] - w[loser] + noise_sd * normal(rng);
      if (!(t > 0.0)) {
        consistent = false;
        break;
      }
    }
    if (!consistent) continue;
    ++out.accepted;
    for (std::size_t i = 0; i < n; ++i) {
      sum[i] += w[i];
      sum_sq[i] += w[i] * w[i];
    }
  }
  const double count = static_cast<double>(out.accepted);
  for (std::size_t i = 0; i < n; ++i) {
    const double mean = sum[i] / count;
    out.means.push_back(mean);
    out.variances.push_back(sum_sq[i] / count - mean * mean);
  }
  return out;
}

QuadratureMoments TruncationByQuadrature(double t) {
  // Integrate over u = x - t on (-t, inf), written as a shift onto (0, inf).
  boost::math::quadrature::exp_sinh<double> integrator;
  const double lo = -t;
  const double tol = 1e-14;
  // Factor exp(-lo^2/2) out of the integrand so deep tails do not underflow.
  const auto scaled = [&](double s, int power) {
    const double u = lo + s;
    const double log_ratio = -0.5 * (u * u - lo * lo);
    return std::pow(u, power) * std::exp(log_ratio);
  };
  const double z0 = integrator.integrate([&](double s) { return scaled(s, 0); }, tol);
  const double z1 = integrator.integrate([&](double s) { return scaled(s, 1); }, tol);
  const double mean_u = z1 / z0;
  const double var = integrator.integrate(
                         [&](double s) {
                           const double u = lo + s;
                           return (u - mean_u) * (u - mean_u) *
                                  std::exp(-0.5 * (u * u - lo * lo));
                         },
                         tol) /
                     z0;
  // Truncated variable x = t + u has mean t + E[u]; v = E[x] - t.
  return {mean_u, 1.0 - var};
}

DenseGpResult DenseGpPredict(const std::vector<Eigen::VectorXd>& train,
                             const Eigen::VectorXd& observed,
                             const Eigen::VectorXd& noise, double jitter,
                             double length_scale, const Eigen::VectorXd& query) {
  const auto n = static_cast<Eigen::Index>(train.size());
  if (n == 0) return {0.0, 1.0};
  const auto kernel = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double cos_sim = a.dot(b) / (a.norm() * b.norm());
    return std::exp(-(1.0 - cos_sim) / (2.0 * length_scale * length_scale));
  };
  Eigen::MatrixXd k(n, n);
  Eigen::VectorXd k_star(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = kernel(train[i], train[j]);
    k_star[i] = kernel(query, train[i]);
  }
  k.diagonal() += noise;
  k.diagonal().array() += jitter;
  const Eigen::MatrixXd inverse = k.fullPivLu().inverse();
  return {k_star.dot(inverse * observed),
          kernel(query, query) - k_star.dot(inverse * k_star)};
}

std::vector<std::size_t> GreedySpacedByArgmax(std::span<const double> scores,
                                              std::size_t n, std::size_t d) {
  std::vector<bool> feasible(scores.size(), true);
  std::vector<std::size_t> chosen;
  while (chosen.size() < n) {
    std::size_t best = scores.size();
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (!feasible[i]) continue;
      if (best == scores.size() || scores[i] > scores[best]) best = i;
    }
    if (best == scores.size()) break;
    chosen.push_back(best);
    feasible[best] = false;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const std::size_t gap = i > best ? i - best : best - i;
      if (gap < d) feasible[i] = false;
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<std::uint32_t> FeasibleSpacedSubsets(std::size_t count, std::size_t n,
                                                 std::size_t d) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < (1u << count); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > n) continue;
    bool ok = true;
    for (std::size_t i = 0; i < count && ok; ++i) {
      for (std::size_t j = i + 1; j < count && ok; ++j) {
        if ((mask >> i & 1u) && (mask >> j & 1u) && j - i < d) ok = false;
      }
    }
    if (ok) out.push_back(mask);
  }
  return out;
}

std::pair<std::size_t, std::size_t> ExhaustiveTwoMedoids(const Eigen::MatrixXd& d) {
  const auto n = static_cast<std::size_t>(d.rows());
  double best = std::numeric_limits<double>::infinity();
  std::pair<std::size_t, std::size_t> arg{0, 0};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      double cost = 0.0;
      for (std::size_t x = 0; x < n; ++x) {
        cost += std::min(d(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(a)),
                         d(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(b)));
      }
      if (cost < best) {
        best = cost;
        arg = {a, b};
      }
    }
  }
  return arg;
}

std::vector<std::vector<std::size_t>> NaiveAverageLinkage(const Eigen::MatrixXd& d,
                                                          std::size_t k) {
  std::vector<std::vector<std::size_t>> clusters;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    clusters.push_back({static_cast<std::size_t>(i)});
  }
  const auto linkage = [&](const std::vector<std::size_t>& a,
                           const std::vector<std::size_t>& b) {
    double total = 0.0;
    for (std::size_t x : a) {
      for (std::size_t y : b) {
        total += d(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
      }
    }
    return total / static_cast<double>(a.size() * b.size());
  };
  while (clusters.size() > k) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double l = linkage(clusters[i], clusters[j]);
        if (l < best) {
          best = l;
          bi = i;
          bj = j;
        }
      }
    }
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  for (auto& c : clusters) std::sort(c.begin(), c.end());
  std::sort(clusters.begin(), clusters.end());
  return clusters;
}

}  // namespace interest::testing
