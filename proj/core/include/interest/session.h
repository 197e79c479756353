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

#ifndef INTEREST_SESSION_H_
#define INTEREST_SESSION_H_

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "interest/comparison_log.h"
#include "interest/feature_store.h"
#include "interest/gp_smoother.h"
#include "interest/pipeline.h"
#include "interest/ranker.h"

namespace interest {

// Uniform random unordered pair of distinct images, a pure function of
// (seed, draw). Throws PreconditionError for stores with fewer than 2 images.
std::pair<ImageId, ImageId> SamplePair(const FeatureStore& store,
                                       std::uint64_t seed, std::uint64_t draw);

struct ServiceConfig {
  PipelineConfig pipeline;
  std::uint64_t rng_seed = 0;
  // Background recompute after every K recorded judgments; 0 disables.
  std::size_t auto_recompute_every = 25;
};

// Complete, immutable result of one recompute.
struct ScoreSnapshot {
  // Smoothed interest for every image in the store, in store order.
  InterestPosterior scores;
  GpModel model;
  // Log prefix the scores were computed from.
  std::size_t covered_log_length = 0;
  bool ep_converged = true;
  int ep_iterations = 0;
};

enum class RecomputeState { kIdle, kRunning, kFailed };

std::string RecomputeStateName(RecomputeState state);

struct SessionStatus {
  std::size_t images = 0;
  std::size_t log_length = 0;
  std::size_t skips = 0;
  std::optional<std::size_t> covered_log_length;
  RecomputeState state = RecomputeState::kIdle;
  std::string failure_reason;
  // Non-fatal note from the last recompute (EP non-convergence).
  std::string warning;
};

// State of the live labelling loop. Judgments go through one serialized
// writer; recomputes run one at a time and publish complete snapshots, so
// readers see either the previous scores or the new ones.
class Session {
 public:
  // Opens (or creates) the comparison log and the skip audit log.
  Session(FeatureStore store, const std::filesystem::path& log_path,
          const std::filesystem::path& skip_log_path, ServiceConfig cfg = {});
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const FeatureStore& store() const { return store_; }
  const ServiceConfig& config() const { return cfg_; }

  // The pair to present next. Depends only on the seed and the number of
  // judgments (comparisons plus skips) recorded so far, so repeated reads
  // return the same pair and the sequence replays after a restart.
  std::pair<ImageId, ImageId> NextPair() const;

  struct Recorded {
    Comparison comparison;
    std::size_t log_length = 0;
    // The judgment id was seen before; nothing was appended and
    // `comparison` is the original entry.
    bool duplicate = false;
  };
  // Validates, then appends durably before returning. A non-empty
  // judgment_id already in the log returns the earlier entry instead. Throws
  // InvalidArgumentError for unknown or equal ids and IoError on storage
  // failure (log unchanged).
  Recorded RecordComparison(const std::string& winner, const std::string& loser,
                            const std::string& session_id,
                            const std::string& judgment_id = "");

  // Audit only; never enters the comparison log. Returns the skip count.
  std::size_t RecordSkip(const std::string& a, const std::string& b,
                         const std::string& session_id);

  // EP over the full log, then GP smoothing; scores cover every image.
  // Concurrent callers coalesce onto one run. Throws PreconditionError for an
  // empty log; a GP failure marks the state failed, keeps the previous
  // snapshot and rethrows.
  std::shared_ptr<const ScoreSnapshot> Recompute();

  // Schedules a background Recompute; repeated requests coalesce.
  void RequestRecompute();
  // Blocks until no background recompute is pending or running.
  void WaitForBackgroundIdle();

  std::shared_ptr<const ScoreSnapshot> scores() const;
  SessionStatus status() const;
  std::vector<Comparison> comparisons() const { return log_.Snapshot(); }

 private:
  void BackgroundLoop();
  void ValidatePair(const std::string& a, const std::string& b) const;

  const FeatureStore store_;
  const ServiceConfig cfg_;
  ComparisonLog log_;
  std::mutex record_mu_;
  // judgment_id -> 1-based log position.
  std::unordered_map<std::string, std::size_t> judgments_;

  mutable std::mutex skip_mu_;
  DurableJsonlFile skip_log_;
  std::size_t skips_ = 0;

  std::mutex recompute_mu_;

  mutable std::mutex state_mu_;
  std::shared_ptr<const ScoreSnapshot> snapshot_;
  RecomputeState state_ = RecomputeState::kIdle;
  std::string failure_reason_;
  std::string warning_;

  std::mutex bg_mu_;
  std::condition_variable bg_cv_;
  bool bg_pending_ = false;
  bool bg_running_ = false;
  bool bg_stop_ = false;
  std::thread bg_thread_;
};

}  // namespace interest

#endif  // INTEREST_SESSION_H_
