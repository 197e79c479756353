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

#include "interest/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include "interest/errors.h"

namespace interest {

namespace {

std::string ImageName(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "img_%04zu", i);
  return buf;
}

Eigen::VectorXd RandomUnit(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  do {
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = normal(rng);
  } while (v.norm() == 0.0);
  return v.normalized();
}

}  // namespace

ComparisonSplit SplitComparisons(std::span<const Comparison> all,
                                 const SplitConfig& cfg) {
  if (all.empty()) {
    throw InvalidArgumentError("SplitComparisons: empty comparison list");
  }
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction <= 1.0)) {
    throw InvalidArgumentError("SplitComparisons: train_fraction must be in (0, 1]");
  }
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto n_train = static_cast<std::size_t>(
      std::llround(cfg.train_fraction * static_cast<double>(all.size())));
  ComparisonSplit out;
  out.train.reserve(n_train);
  out.test.reserve(all.size() - n_train);
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < n_train ? out.train : out.test).push_back(all[order[k]]);
  }
  return out;
}

double PredictionAccuracy(const ScoreMap& scores,
                          std::span<const Comparison> test) {
  if (test.empty()) return 0.0;
  const auto score = [&](const ImageId& id) {
    auto it = scores.find(id);
    if (it == scores.end()) {
      throw InvalidArgumentError("PredictionAccuracy: no score for image '" +
                                 id + "'");
    }
    return it->second;
  };
  std::size_t correct = 0;
  for (const Comparison& c : test) {
    if (score(c.winner_id) > score(c.loser_id)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

SyntheticDataset SynthesizeDataset(const SyntheticOptions& options) {
  if (options.n_images < 2) {
    throw InvalidArgumentError("SynthesizeDataset: need at least 2 images");
  }
  if (options.dim < 2) {
    throw InvalidArgumentError("SynthesizeDataset: need dim >= 2");
  }
  if (options.n_clusters < 1) {
    throw InvalidArgumentError("SynthesizeDataset: need at least one cluster");
  }
  if (!(options.noise_std >= 0.0) || !std::isfinite(options.noise_std)) {
    throw InvalidArgumentError("SynthesizeDataset: noise_std must be >= 0");
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  const auto dim = static_cast<Eigen::Index>(options.dim);

  std::vector<Eigen::VectorXd> centres;
  for (std::size_t k = 0; k < options.n_clusters; ++k) {
    centres.push_back(RandomUnit(options.dim, rng));
  }
  Eigen::VectorXd functional(dim);
  for (Eigen::Index k = 0; k < dim; ++k) functional[k] = normal(rng);

  SyntheticDataset out;
  out.seed = options.seed;
  std::uniform_int_distribution<std::size_t> pick_cluster(0, options.n_clusters - 1);
  const double scatter = options.cluster_spread / std::sqrt(static_cast<double>(dim));
  for (std::size_t i = 0; i < options.n_images; ++i) {
    Eigen::VectorXd x = centres[pick_cluster(rng)];
    for (Eigen::Index k = 0; k < dim; ++k) x[k] += scatter * normal(rng);
    if (x.norm() == 0.0) x[0] = 1.0;
    out.true_interest.push_back(options.interest_gain * functional.dot(x.normalized()));
    out.features.Add({ImageName(i), ImageName(i) + ".png", std::move(x)});
  }

  const auto epoch = std::chrono::system_clock::from_time_t(1700000000);
  std::uniform_int_distribution<std::size_t> pick_first(0, options.n_images - 1);
  std::uniform_int_distribution<std::size_t> pick_second(0, options.n_images - 2);
  out.comparisons.reserve(options.n_comparisons);
  for (std::size_t k = 0; k < options.n_comparisons; ++k) {
    const std::size_t i = pick_first(rng);
    std::size_t j = pick_second(rng);
    if (j >= i) ++j;
    const double noise = options.noise_std > 0.0 ? options.noise_std * normal(rng) : 0.0;
    const bool i_wins = out.true_interest[i] - out.true_interest[j] + noise > 0.0;
    Comparison c;
    c.winner_id = ImageName(i_wins ? i : j);
    c.loser_id = ImageName(i_wins ? j : i);
    c.timestamp = epoch + std::chrono::seconds(static_cast<long>(k));
    c.session_id = "synthetic-" + std::to_string(options.seed);
    out.comparisons.push_back(std::move(c));
  }
  return out;
}

ScoreMap TrueScores(const SyntheticDataset& dataset) {
  ScoreMap out;
  for (std::size_t i = 0; i < dataset.features.size(); ++i) {
    out.emplace(dataset.features.at(i).id, dataset.true_interest[i]);
  }
  return out;
}

std::string MethodLabel(Method method) {
  switch (method) {
    case Method::kTrueSkill:
      return "TS";
    case Method::kGpCnn:
      return "GP-CNN";
  }
  return "unknown";
}

const MethodTrace& AccuracyTrace::For(Method method) const {
  for (const MethodTrace& m : methods) {
    if (m.method == method) return m;
  }
  throw InvalidArgumentError("AccuracyTrace: no trace for method " +
                             MethodLabel(method));
}

AccuracyTrace ComputeAccuracyTrace(const SyntheticDataset& dataset,
                                   const SplitConfig& split,
                                   std::span<const std::size_t> budgets,
                                   std::span<const Method> methods,
                                   const PipelineConfig& cfg) {
  const ComparisonSplit parts = SplitComparisons(dataset.comparisons, split);
  for (std::size_t k = 0; k < budgets.size(); ++k) {
    if (budgets[k] > parts.train.size()) {
      throw InvalidArgumentError("ComputeAccuracyTrace: budget " +
                                 std::to_string(budgets[k]) +
                                 " exceeds training set of " +
                                 std::to_string(parts.train.size()));
    }
    if (k > 0 && budgets[k] <= budgets[k - 1]) {
      throw InvalidArgumentError(
          "ComputeAccuracyTrace: budgets must be strictly increasing");
    }
  }

  AccuracyTrace trace;
  trace.seed = split.seed;
  trace.budgets.assign(budgets.begin(), budgets.end());
  for (Method m : methods) trace.methods.push_back({m, {}});

  for (std::size_t budget : budgets) {
    const std::span<const Comparison> used(parts.train.data(), budget);
    for (MethodTrace& mt : trace.methods) {
      ScoreMap scores;
      switch (mt.method) {
        case Method::kTrueSkill:
          scores = ToScoreMap(RankTrueSkill(dataset.features, used, cfg));
          break;
        case Method::kGpCnn:
          scores = ToScoreMap(RankGpCnn(dataset.features, used, cfg).scores);
          break;
      }
      mt.accuracies.push_back(PredictionAccuracy(scores, parts.test));
    }
  }
  return trace;
}

AccuracyTrace MeanTrace(std::span<const AccuracyTrace> traces) {
  if (traces.empty()) throw InvalidArgumentError("MeanTrace: no traces");
  AccuracyTrace mean = traces.front();
  for (std::size_t t = 1; t < traces.size(); ++t) {
    const AccuracyTrace& other = traces[t];
    if (other.budgets != mean.budgets ||
        other.methods.size() != mean.methods.size()) {
      throw InvalidArgumentError("MeanTrace: traces disagree on layout");
    }
    for (std::size_t m = 0; m < mean.methods.size(); ++m) {
      const MethodTrace& src = other.For(mean.methods[m].method);
      for (std::size_t b = 0; b < mean.budgets.size(); ++b) {
        mean.methods[m].accuracies[b] += src.accuracies[b];
      }
    }
  }
  for (MethodTrace& mt : mean.methods) {
    for (double& a : mt.accuracies) a /= static_cast<double>(traces.size());
  }
  return mean;
}

void WriteTraceCsv(std::span<const AccuracyTrace> traces, std::ostream& out) {
  out << "method,budget,accuracy,seed\n";
  char buf[64];
  for (const AccuracyTrace& t : traces) {
    for (const MethodTrace& mt : t.methods) {
      for (std::size_t b = 0; b < t.budgets.size(); ++b) {
        std::snprintf(buf, sizeof(buf), "%.6f", mt.accuracies[b]);
        out << MethodLabel(mt.method) << ',' << t.budgets[b] << ',' << buf
            << ',' << t.seed << '\n';
      }
    }
  }
}

nlohmann::json TraceSummaryJson(std::span<const AccuracyTrace> traces) {
  const AccuracyTrace mean = MeanTrace(traces);
  nlohmann::json seeds = nlohmann::json::array();
  for (const AccuracyTrace& t : traces) seeds.push_back(t.seed);
  nlohmann::json methods = nlohmann::json::object();
  for (const MethodTrace& mt : mean.methods) {
    methods[MethodLabel(mt.method)] = mt.accuracies;
  }
  return {{"budgets", mean.budgets},
          {"seeds", seeds},
          {"mean_accuracy", methods}};
}

}  // namespace interest
