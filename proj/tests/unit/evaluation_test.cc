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
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "interest/errors.h"

namespace interest {
namespace {

std::vector<Comparison> Numbered(std::size_t n) {
  std::vector<Comparison> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"w" + std::to_string(i), "l" + std::to_string(i), {}, ""});
  }
  return out;
}

std::multiset<std::string> Keys(const std::vector<Comparison>& v) {
  std::multiset<std::string> out;
  for (const auto& c : v) out.insert(c.winner_id);
  return out;
}

TEST(SplitComparisonsTest, PaperSplitSizes) {
  const auto all = Numbered(15000);
  const ComparisonSplit split = SplitComparisons(all, {2.0 / 3.0, 4});
  EXPECT_EQ(split.train.size(), 10000u);
  EXPECT_EQ(split.test.size(), 5000u);
  std::multiset<std::string> joined = Keys(split.train);
  for (const auto& k : Keys(split.test)) joined.insert(k);
  EXPECT_EQ(joined, Keys(all));
}

TEST(SplitComparisonsTest, FractionOneAndDeterminism) {
  const auto all = Numbered(37);
  const ComparisonSplit whole = SplitComparisons(all, {1.0, 1});
  EXPECT_EQ(whole.train.size(), 37u);
  EXPECT_TRUE(whole.test.empty());

  const ComparisonSplit a = SplitComparisons(all, {0.5, 9});
  const ComparisonSplit b = SplitComparisons(all, {0.5, 9});
  ASSERT_EQ(a.train.size(), 19u);
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    EXPECT_EQ(a.train[i].winner_id, b.train[i].winner_id);
  }
  const ComparisonSplit c = SplitComparisons(all, {0.5, 10});
  bool differs = false;
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    differs |= a.train[i].winner_id != c.train[i].winner_id;
  }
  EXPECT_TRUE(differs);
}

TEST(SplitComparisonsTest, Errors) {
  EXPECT_THROW(SplitComparisons({}, {}), InvalidArgumentError);
  const auto all = Numbered(3);
  EXPECT_THROW(SplitComparisons(all, {0.0, 0}), InvalidArgumentError);
  EXPECT_THROW(SplitComparisons(all, {1.5, 0}), InvalidArgumentError);
}

SyntheticDataset Noiseless(std::uint64_t seed) {
  SyntheticOptions opts;
  opts.n_images = 60;
  opts.dim = 8;
  opts.n_comparisons = 400;
  opts.noise_std = 0.0;
  opts.seed = seed;
  return SynthesizeDataset(opts);
}

TEST(PredictionAccuracyTest, OracleTiesAndAntiOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SyntheticDataset data = Noiseless(seed);
    const ScoreMap truth = TrueScores(data);
    EXPECT_EQ(PredictionAccuracy(truth, data.comparisons), 1.0);

    ScoreMap flat = truth;
    for (auto& [id, s] : flat) s = 0.25;
    EXPECT_EQ(PredictionAccuracy(flat, data.comparisons), 0.0);

    ScoreMap negated = truth;
    for (auto& [id, s] : negated) s = -s;
    EXPECT_EQ(PredictionAccuracy(negated, data.comparisons), 0.0);
  }
}

TEST(PredictionAccuracyTest, EmptyAndMissing) {
  EXPECT_EQ(PredictionAccuracy({}, {}), 0.0);
  const std::vector<Comparison> one = {{"a", "b", {}, ""}};
  EXPECT_THROW(PredictionAccuracy({{"a", 1.0}}, one), InvalidArgumentError);
  EXPECT_EQ(PredictionAccuracy({{"a", 1.0}, {"b", 0.0}}, one), 1.0);
}

TEST(PredictionAccuracyTest, InvariantUnderIncreasingTransforms) {
  SyntheticOptions opts;
  opts.n_images = 80;
  opts.dim = 6;
  opts.n_comparisons = 500;
  opts.noise_std = 1.0;
  const SyntheticDataset data = SynthesizeDataset(opts);
  const ScoreMap truth = TrueScores(data);
  const double base = PredictionAccuracy(truth, data.comparisons);
  for (auto transform : {+[](double x) { return std::exp(x); },
                         +[](double x) { return 3.0 * x - 7.0; },
                         +[](double x) { return std::atan(x) + x * x * x; }}) {
    ScoreMap mapped = truth;
    for (auto& [id, s] : mapped) s = transform(s);
    EXPECT_EQ(PredictionAccuracy(mapped, data.comparisons), base);
  }
}

TEST(SynthesizeDatasetTest, DeterministicAndWellFormed) {
  SyntheticOptions opts;
  opts.n_images = 50;
  opts.dim = 10;
  opts.n_comparisons = 200;
  opts.seed = 17;
  const SyntheticDataset a = SynthesizeDataset(opts);
  const SyntheticDataset b = SynthesizeDataset(opts);
  ASSERT_EQ(a.features.size(), 50u);
  EXPECT_EQ(*a.features.dim(), 10);
  ASSERT_EQ(a.comparisons.size(), 200u);
  EXPECT_EQ(a.true_interest, b.true_interest);
  for (std::size_t i = 0; i < a.features.size(); ++i) {
    EXPECT_EQ(a.features.at(i).features, b.features.at(i).features);
  }
  for (std::size_t i = 0; i < a.comparisons.size(); ++i) {
    EXPECT_EQ(a.comparisons[i].winner_id, b.comparisons[i].winner_id);
    EXPECT_EQ(a.comparisons[i].loser_id, b.comparisons[i].loser_id);
    EXPECT_EQ(a.comparisons[i].timestamp, b.comparisons[i].timestamp);
    EXPECT_NE(a.comparisons[i].winner_id, a.comparisons[i].loser_id);
  }
  opts.seed = 18;
  EXPECT_NE(SynthesizeDataset(opts).true_interest, a.true_interest);
}

TEST(SynthesizeDatasetTest, RejectsInvalidSizes) {
  SyntheticOptions opts;
  opts.n_images = 1;
  EXPECT_THROW(SynthesizeDataset(opts), InvalidArgumentError);
  opts = {};
  opts.dim = 1;
  EXPECT_THROW(SynthesizeDataset(opts), InvalidArgumentError);
  opts = {};
  opts.noise_std = -0.1;
  EXPECT_THROW(SynthesizeDataset(opts), InvalidArgumentError);
  opts = {};
  opts.n_clusters = 0;
  EXPECT_THROW(SynthesizeDataset(opts), InvalidArgumentError);
}

// Replays the outcomes against the generating interests directly.
TEST(SynthesizeDatasetTest, NoisyOracleAccuracyMatchesReplay) {
  SyntheticOptions opts;
  opts.n_images = 500;
  opts.dim = 64;
  opts.n_comparisons = 3000;
  opts.noise_std = 0.5;
  opts.seed = 3;
  const SyntheticDataset data = SynthesizeDataset(opts);
  std::size_t agree = 0;
  for (const auto& c : data.comparisons) {
    const double w = data.true_interest[*data.features.IndexOf(c.winner_id)];
    const double l = data.true_interest[*data.features.IndexOf(c.loser_id)];
    agree += w > l;
  }
  const double replay = static_cast<double>(agree) / 3000.0;
  const double acc = PredictionAccuracy(TrueScores(data), data.comparisons);
  EXPECT_EQ(acc, replay);
  EXPECT_GE(acc, 0.5);
  EXPECT_LT(acc, 1.0);
}

TEST(AccuracyTraceTest, ZeroBudgetDeterminismAndErrors) {
  SyntheticOptions opts;
  opts.n_images = 60;
  opts.dim = 8;
  opts.n_comparisons = 300;
  opts.seed = 2;
  const SyntheticDataset data = SynthesizeDataset(opts);
  const std::vector<std::size_t> budgets = {0, 20, 100, 200};
  const std::vector<Method> methods = {Method::kTrueSkill, Method::kGpCnn};
  const SplitConfig split{2.0 / 3.0, 5};
  const AccuracyTrace a = ComputeAccuracyTrace(data, split, budgets, methods);
  const AccuracyTrace b = ComputeAccuracyTrace(data, split, budgets, methods);
  EXPECT_EQ(a.For(Method::kTrueSkill).accuracies[0], 0.0);
  EXPECT_EQ(a.For(Method::kGpCnn).accuracies[0], 0.0);
  EXPECT_EQ(a.For(Method::kTrueSkill).accuracies, b.For(Method::kTrueSkill).accuracies);
  EXPECT_EQ(a.For(Method::kGpCnn).accuracies, b.For(Method::kGpCnn).accuracies);
  for (double acc : a.For(Method::kGpCnn).accuracies) {
    EXPECT_GE(acc, 0.0);
    EXPECT_LE(acc, 1.0);
  }
  EXPECT_GT(a.For(Method::kGpCnn).accuracies.back(), 0.5);

  const std::vector<std::size_t> too_big = {10, 201};
  EXPECT_THROW(ComputeAccuracyTrace(data, split, too_big, methods), InvalidArgumentError);
  const std::vector<std::size_t> unordered = {20, 10};
  EXPECT_THROW(ComputeAccuracyTrace(data, split, unordered, methods), InvalidArgumentError);
}

TEST(AccuracyTraceTest, MeanCsvAndJson) {
  AccuracyTrace t1{{10, 20}, {{Method::kTrueSkill, {0.5, 0.7}}, {Method::kGpCnn, {0.6, 0.8}}}, 1};
  AccuracyTrace t2{{10, 20}, {{Method::kTrueSkill, {0.7, 0.9}}, {Method::kGpCnn, {0.8, 1.0}}}, 2};
  const std::vector<AccuracyTrace> traces = {t1, t2};
  const AccuracyTrace mean = MeanTrace(traces);
  EXPECT_NEAR(mean.For(Method::kTrueSkill).accuracies[0], 0.6, 1e-15);
  EXPECT_NEAR(mean.For(Method::kGpCnn).accuracies[1], 0.9, 1e-15);

  std::ostringstream csv;
  WriteTraceCsv(traces, csv);
  const std::string text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "method,budget,accuracy,seed");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 9);
  EXPECT_NE(text.find("GP-CNN,20,"), std::string::npos);

  const nlohmann::json summary = TraceSummaryJson(traces);
  EXPECT_TRUE(summary.is_object());
  EXPECT_EQ(MethodLabel(Method::kTrueSkill), "TS");
  EXPECT_EQ(MethodLabel(Method::kGpCnn), "GP-CNN");
}

}  // namespace
}  // namespace interest
