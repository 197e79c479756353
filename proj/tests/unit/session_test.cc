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

#include "interest/session.h"

#include <unistd.h>

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "gtest/gtest.h"
#include "interest/errors.h"

namespace interest {
namespace {

namespace fs = std::filesystem;

FeatureStore MakeStore(std::size_t n) {
  FeatureStore store;
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd v(4);
    v << 1.0, std::cos(0.4 * i), std::sin(0.4 * i), 0.1 * i;
    store.Add({"img" + std::to_string(i), "img" + std::to_string(i) + ".png", v});
  }
  return store;
}

class SessionTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("interest_session_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::unique_ptr<Session> Open(std::size_t n, ServiceConfig cfg = {}) {
    return std::make_unique<Session>(MakeStore(n), dir_ / "log.jsonl", dir_ / "skips.jsonl",
                                     cfg);
  }

  fs::path dir_;
};

TEST(SamplePairTest, TwoImagesGiveTheOnlyPair) {
  const FeatureStore store = MakeStore(2);
  for (std::uint64_t draw = 0; draw < 50; ++draw) {
    const auto [a, b] = SamplePair(store, 3, draw);
    EXPECT_EQ(std::set<std::string>({a, b}), (std::set<std::string>{"img0", "img1"}));
  }
}

TEST(SamplePairTest, DistinctDeterministicAndRoughlyUniform) {
  const FeatureStore store = MakeStore(5);
  std::map<std::set<std::string>, int> counts;
  for (std::uint64_t draw = 0; draw < 20000; ++draw) {
    const auto p = SamplePair(store, 42, draw);
    EXPECT_NE(p.first, p.second);
    EXPECT_EQ(p, SamplePair(store, 42, draw));
    ++counts[{p.first, p.second}];
  }
  ASSERT_EQ(counts.size(), 10u);
  for (const auto& [pair, count] : counts) {
    EXPECT_NEAR(count, 2000, 200);
  }
  int differs = 0;
  for (std::uint64_t draw = 0; draw < 100; ++draw) {
    differs += SamplePair(store, 42, draw) != SamplePair(store, 43, draw);
  }
  EXPECT_GT(differs, 50);
}

TEST(SamplePairTest, TooFewImages) {
  EXPECT_THROW(SamplePair(MakeStore(1), 0, 0), PreconditionError);
  EXPECT_THROW(SamplePair(FeatureStore{}, 0, 0), PreconditionError);
}

TEST_F(SessionTest, NextPairIsStableUntilAJudgmentAndReplaysAfterRestart) {
  std::vector<std::pair<ImageId, ImageId>> first;
  {
    auto s = Open(6);
    for (int k = 0; k < 5; ++k) {
      const auto p = s->NextPair();
      EXPECT_EQ(p, s->NextPair());
      first.push_back(p);
      if (k == 2) {
        s->RecordSkip(p.first, p.second, "op");
      } else {
        s->RecordComparison(p.first, p.second, "op");
      }
    }
  }
  auto s = Open(6);
  EXPECT_EQ(s->status().log_length, 4u);
  EXPECT_EQ(s->status().skips, 1u);
  EXPECT_EQ(s->NextPair(), SamplePair(s->store(), 0, 5));
  for (std::size_t k = 0; k < first.size(); ++k) {
    EXPECT_EQ(first[k], SamplePair(s->store(), 0, k));
  }
}

TEST_F(SessionTest, RecordValidatesAndKeepsDuplicates) {
  auto s = Open(4);
  EXPECT_THROW(s->RecordComparison("img0", "img0", "op"), InvalidArgumentError);
  EXPECT_THROW(s->RecordComparison("img0", "nope", "op"), InvalidArgumentError);
  EXPECT_THROW(s->RecordSkip("nope", "img0", "op"), InvalidArgumentError);
  EXPECT_EQ(s->status().log_length, 0u);
  EXPECT_EQ(s->RecordComparison("img0", "img1", "op").log_length, 1u);
  const auto second = s->RecordComparison("img0", "img1", "op");
  EXPECT_EQ(second.log_length, 2u);
  EXPECT_FALSE(second.duplicate);
  EXPECT_EQ(s->comparisons().size(), 2u);
}

TEST_F(SessionTest, JudgmentIdsMakeRetriesIdempotent) {
  {
    auto s = Open(4);
    const auto a = s->RecordComparison("img0", "img1", "op", "j1");
    EXPECT_FALSE(a.duplicate);
    const auto again = s->RecordComparison("img0", "img1", "op", "j1");
    EXPECT_TRUE(again.duplicate);
    EXPECT_EQ(again.comparison, a.comparison);
    EXPECT_EQ(s->comparisons().size(), 1u);
    s->RecordComparison("img2", "img1", "op", "j2");
  }
  auto s = Open(4);
  EXPECT_TRUE(s->RecordComparison("img0", "img1", "op", "j1").duplicate);
  EXPECT_FALSE(s->RecordComparison("img0", "img1", "op", "j3").duplicate);
  EXPECT_EQ(s->comparisons().size(), 3u);
}

TEST_F(SessionTest, SkipsNeverEnterTheComparisonLog) {
  auto s = Open(4);
  EXPECT_EQ(s->RecordSkip("img0", "img1", "op"), 1u);
  EXPECT_EQ(s->RecordSkip("img2", "img1", "op"), 2u);
  EXPECT_EQ(s->status().log_length, 0u);
  EXPECT_TRUE(s->comparisons().empty());
  EXPECT_THROW(s->Recompute(), PreconditionError);
}

TEST_F(SessionTest, RecomputeScoresEveryImage) {
  auto s = Open(5, ServiceConfig{{}, 0, 0});
  EXPECT_EQ(s->scores(), nullptr);
  EXPECT_THROW(s->Recompute(), PreconditionError);
  s->RecordComparison("img0", "img1", "op");
  s->RecordComparison("img0", "img1", "op");
  const auto snap = s->Recompute();
  ASSERT_EQ(snap->scores.size(), 5u);
  EXPECT_EQ(snap->scores.ids, s->store().ids());
  EXPECT_EQ(snap->covered_log_length, 2u);
  EXPECT_GT(snap->scores.means[0], snap->scores.means[1]);
  EXPECT_EQ(s->status().covered_log_length, 2u);
  EXPECT_EQ(s->status().state, RecomputeState::kIdle);
  // Unchanged log: the existing snapshot is reused.
  EXPECT_EQ(s->Recompute(), snap);
}

TEST_F(SessionTest, RerunIsBitIdentical) {
  std::shared_ptr<const ScoreSnapshot> first;
  {
    auto s = Open(8, ServiceConfig{{}, 0, 0});
    for (int k = 0; k < 30; ++k) {
      const auto [a, b] = s->NextPair();
      s->RecordComparison(k % 3 ? a : b, k % 3 ? b : a, "op");
    }
    first = s->Recompute();
  }
  auto s = Open(8, ServiceConfig{{}, 0, 0});
  const auto second = s->Recompute();
  EXPECT_EQ(first->scores.means, second->scores.means);
  EXPECT_EQ(first->scores.variances, second->scores.variances);
}

TEST_F(SessionTest, ConcurrentRecomputesCoalesce) {
  auto s = Open(10, ServiceConfig{{}, 0, 0});
  for (int k = 0; k < 20; ++k) {
    const auto [a, b] = s->NextPair();
    s->RecordComparison(a, b, "op");
  }
  std::vector<std::shared_ptr<const ScoreSnapshot>> results(6);
  {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < results.size(); ++t) {
      threads.emplace_back([&, t] { results[t] = s->Recompute(); });
    }
  }
  for (const auto& r : results) EXPECT_EQ(r, results[0]);
}

TEST_F(SessionTest, AutoRecomputeEveryK) {
  auto s = Open(6, ServiceConfig{{}, 1, 3});
  for (int k = 0; k < 2; ++k) {
    const auto [a, b] = s->NextPair();
    s->RecordComparison(a, b, "op");
  }
  s->WaitForBackgroundIdle();
  EXPECT_EQ(s->scores(), nullptr);
  const auto [a, b] = s->NextPair();
  s->RecordComparison(a, b, "op");
  s->WaitForBackgroundIdle();
  ASSERT_NE(s->scores(), nullptr);
  EXPECT_EQ(s->scores()->covered_log_length, 3u);
}

TEST_F(SessionTest, NonConvergenceIsAWarning) {
  ServiceConfig cfg{{}, 0, 0};
  cfg.pipeline.ep.max_iterations = 1;
  cfg.pipeline.ep.tolerance = 1e-15;
  auto s = Open(3, cfg);
  s->RecordComparison("img0", "img1", "op");
  s->RecordComparison("img1", "img2", "op");
  s->RecordComparison("img2", "img0", "op");
  const auto snap = s->Recompute();
  EXPECT_FALSE(snap->ep_converged);
  EXPECT_FALSE(s->status().warning.empty());
  EXPECT_EQ(s->status().state, RecomputeState::kIdle);
  EXPECT_EQ(RecomputeStateName(RecomputeState::kFailed), "failed");
}

}  // namespace
}  // namespace interest
