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

#include "interest/storyboard.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "interest/errors.h"
#include "oracles.h"

namespace interest {
namespace {

using Indices = std::vector<std::size_t>;

TEST(SelectTopSpacedTest, Examples) {
  const std::vector<double> scores = {1, 7, 7, 3, 0};
  EXPECT_EQ(SelectTopSpacedIndices(scores, {1, 0}), (Indices{1}));
  EXPECT_EQ(SelectTopSpacedIndices(scores, {3, 0}), (Indices{1, 2, 3}));
  EXPECT_EQ(SelectTopSpacedIndices(scores, {10, 0}), (Indices{0, 1, 2, 3, 4}));
  EXPECT_EQ(SelectTopSpacedIndices(scores, {10, 3}), (Indices{1, 4}));
}

TEST(SelectTopSpacedTest, DescendingScoresMatchBruteForce) {
  const std::vector<double> scores = {5, 4, 3, 2, 1, 0};
  const Indices greedy = SelectTopSpacedIndices(scores, {3, 2});
  EXPECT_EQ(greedy, (Indices{0, 2, 4}));
  // Among feasible size-3 subsets, [0, 2, 4] has the best score vector in
  // lexicographic descending order.
  std::uint32_t best = 0;
  std::vector<double> best_key;
  for (std::uint32_t mask : testing::FeasibleSpacedSubsets(6, 3, 2)) {
    if (std::popcount(mask) != 3) continue;
    std::vector<double> key;
    for (std::size_t i = 0; i < 6; ++i) {
      if (mask >> i & 1u) key.push_back(scores[i]);
    }
    std::sort(key.rbegin(), key.rend());
    if (key > best_key) {
      best_key = key;
      best = mask;
    }
  }
  EXPECT_EQ(best, 0b010101u);
}

TEST(SelectTopSpacedTest, RandomInstancesSatisfySpacingAndMatchOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t count = 1 + rng() % 40;
    std::vector<double> scores(count);
    for (auto& s : scores) s = static_cast<double>(rng() % 8);  // many ties
    const StoryboardSpec spec{1 + rng() % 10, rng() % 6};
    const Indices got = SelectTopSpacedIndices(scores, spec);
    EXPECT_LE(got.size(), spec.n_images);
    EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
    for (std::size_t i = 1; i < got.size(); ++i) {
      EXPECT_GE(got[i] - got[i - 1], spec.min_separation);
      EXPECT_NE(got[i], got[i - 1]);
    }
    Indices oracle = testing::GreedySpacedByArgmax(scores, spec.n_images, spec.min_separation);
    std::sort(oracle.begin(), oracle.end());
    EXPECT_EQ(got, oracle);

    std::vector<double> mapped = scores;
    for (auto& s : mapped) s = std::exp(s) - 100.0;
    EXPECT_EQ(SelectTopSpacedIndices(mapped, spec), got);
  }
}

TEST(SelectTopSpacedTest, IdInterfaceAndShortfall) {
  const std::vector<ImageId> order = {"a", "b", "c", "d"};
  const ScoreMap scores = {{"a", 1}, {"b", 4}, {"c", 2}, {"d", 3}};
  const StoryboardSelection sel = SelectTopSpaced(scores, order, {3, 2});
  EXPECT_EQ(sel.ids, (std::vector<ImageId>{"b", "d"}));
  EXPECT_TRUE(sel.short_of_target);
  EXPECT_FALSE(SelectTopSpaced(scores, order, {2, 2}).short_of_target);
  EXPECT_THROW(SelectTopSpaced({{"a", 1}}, order, {1, 0}), InvalidArgumentError);
  EXPECT_THROW(SelectTopSpaced(scores, order, {0, 0}), InvalidArgumentError);
}

FeatureStore TwoClusters(std::mt19937_64& rng, std::size_t per_cluster) {
  std::normal_distribution<double> noise(0.0, 0.05);
  FeatureStore store;
  for (std::size_t i = 0; i < 2 * per_cluster; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
    v[i % 2 ? 0 : 3] = 1.0;
    for (auto& x : v) x += noise(rng);
    store.Add({"p" + std::to_string(i), "", v});
  }
  return store;
}

TEST(ClusterBaselineTest, Examples) {
  std::mt19937_64 rng(1);
  const FeatureStore store = TwoClusters(rng, 5);
  EXPECT_EQ(ClusterBaseline(store, store.size()), store.ids());

  FeatureStore same;
  for (int i = 0; i < 6; ++i) same.Add({"s" + std::to_string(i), "", Eigen::VectorXd::Ones(3)});
  EXPECT_EQ(ClusterBaseline(same, 1), (std::vector<ImageId>{"s0"}));

  EXPECT_THROW(ClusterBaseline(store, 0), InvalidArgumentError);
  EXPECT_THROW(ClusterBaseline(store, 11), InvalidArgumentError);
}

TEST(ClusterBaselineTest, TwoClustersMatchExhaustiveMedoids) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const FeatureStore store = TwoClusters(rng, 10);
    const std::vector<ImageId> got = ClusterBaseline(store, 2);
    ASSERT_EQ(got.size(), 2u);
    const auto [a, b] = testing::ExhaustiveTwoMedoids(CosineDistanceMatrix(store));
    EXPECT_EQ(got[0], store.at(a).id);
    EXPECT_EQ(got[1], store.at(b).id);
    EXPECT_NE(*store.IndexOf(got[0]) % 2, *store.IndexOf(got[1]) % 2);
  }
}

Eigen::MatrixXd RandomDistances(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal;
  std::vector<Eigen::VectorXd> pts(n, Eigen::VectorXd(3));
  for (auto& p : pts) {
    for (auto& x : p) x = normal(rng);
  }
  Eigen::MatrixXd d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d(i, j) = (pts[i] - pts[j]).norm();
  }
  return d;
}

std::vector<std::vector<std::size_t>> Groups(const std::vector<std::size_t>& labels) {
  std::map<std::size_t, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < labels.size(); ++i) by_label[labels[i]].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [l, members] : by_label) out.push_back(members);
  std::sort(out.begin(), out.end());
  return out;
}

TEST(AverageLinkageTest, MatchesNaiveImplementation) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 25;
    const std::size_t k = 1 + rng() % n;
    const Eigen::MatrixXd d = RandomDistances(rng, n);
    const auto labels = AverageLinkageLabels(d, k);
    ASSERT_EQ(labels.size(), n);
    EXPECT_EQ(Groups(labels), testing::NaiveAverageLinkage(d, k)) << "n=" << n << " k=" << k;
    // Labels are numbered by first appearance.
    std::size_t next = 0;
    for (std::size_t l : labels) {
      EXPECT_LE(l, next);
      if (l == next) ++next;
    }
    EXPECT_EQ(next, k);
  }
}

TEST(AverageLinkageTest, PermutationInvariantPartition) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 20;
    const std::size_t k = 1 + rng() % n;
    const Eigen::MatrixXd d = RandomDistances(rng, n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd pd(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) pd(i, j) = d(perm[i], perm[j]);
    }
    const auto base = AverageLinkageLabels(d, k);
    const auto permuted = AverageLinkageLabels(pd, k);
    std::vector<std::size_t> mapped(n);
    for (std::size_t i = 0; i < n; ++i) mapped[perm[i]] = permuted[i];
    std::vector<std::vector<std::size_t>> a = Groups(base), b = Groups(mapped);
    EXPECT_EQ(a, b);
  }
}

TEST(ClusterMedoidsTest, TieGoesToSmallestIndex) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Ones(4, 4);
  d.diagonal().setZero();
  const std::vector<std::size_t> labels = {0, 1, 0, 1};
  EXPECT_EQ(ClusterMedoids(d, labels), (Indices{0, 1}));
}

TEST(StoryboardManifestTest, Fields) {
  FeatureStore store;
  store.Add({"a", "img/a.png", Eigen::VectorXd::Ones(2)});
  store.Add({"b", "img/b.png", Eigen::VectorXd::Ones(2)});
  const std::vector<ImageId> ids = {"b"};
  const ScoreMap scores = {{"b", 1.5}};
  const nlohmann::json m = StoryboardManifest(store, ids, &scores);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0]["id"], "b");
  EXPECT_EQ(m[0]["path"], "img/b.png");
  EXPECT_EQ(m[0]["score"], 1.5);
  EXPECT_EQ(m[0]["capture_index"], 1);
  EXPECT_TRUE(StoryboardManifest(store, ids, nullptr)[0]["score"].is_null());
}

}  // namespace
}  // namespace interest
