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

#include <random>
#include <utility>

#include "interest/errors.h"
#include "interest/time_util.h"

namespace interest {

std::pair<ImageId, ImageId> SamplePair(const FeatureStore& store,
                                       std::uint64_t seed, std::uint64_t draw) {
  const std::size_t n = store.size();
  if (n < 2) {
    throw PreconditionError("SamplePair: need at least 2 images, store has " +
                            std::to_string(n));
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(draw >> 32)};
  std::mt19937_64 rng(seq);
  const std::size_t i = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  std::size_t j = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
  if (j >= i) ++j;
  return {store.at(i).id, store.at(j).id};
}

std::string RecomputeStateName(RecomputeState state) {
  switch (state) {
    case RecomputeState::kIdle:
      return "idle";
    case RecomputeState::kRunning:
      return "running";
    case RecomputeState::kFailed:
      return "failed";
  }
  return "unknown";
}

Session::Session(FeatureStore store, const std::filesystem::path& log_path,
                 const std::filesystem::path& skip_log_path, ServiceConfig cfg)
    : store_(std::move(store)),
      cfg_(std::move(cfg)),
      log_(log_path),
      skip_log_(skip_log_path) {
  const std::vector<Comparison> existing = log_.Snapshot();
  for (std::size_t i = 0; i < existing.size(); ++i) {
    if (!existing[i].judgment_id.empty()) judgments_.emplace(existing[i].judgment_id, i + 1);
  }
  for (const auto& line : skip_log_.initial_lines()) {
    if (!line.empty()) ++skips_;
  }
  bg_thread_ = std::thread([this] { BackgroundLoop(); });
}

Session::~Session() {
  {
    std::lock_guard<std::mutex> lock(bg_mu_);
    bg_stop_ = true;
  }
  bg_cv_.notify_all();
  if (bg_thread_.joinable()) bg_thread_.join();
}

std::pair<ImageId, ImageId> Session::NextPair() const {
  std::size_t skips;
  {
    std::lock_guard<std::mutex> lock(skip_mu_);
    skips = skips_;
  }
  return SamplePair(store_, cfg_.rng_seed, log_.size() + skips);
}

void Session::ValidatePair(const std::string& a, const std::string& b) const {
  if (!store_.IndexOf(a)) throw InvalidArgumentError("unknown image id '" + a + "'");
  if (!store_.IndexOf(b)) throw InvalidArgumentError("unknown image id '" + b + "'");
  if (a == b) throw InvalidArgumentError("an image cannot be compared with itself");
}

Session::Recorded Session::RecordComparison(const std::string& winner,
                                            const std::string& loser,
                                            const std::string& session_id,
                                            const std::string& judgment_id) {
  ValidatePair(winner, loser);
  Recorded out;
  std::lock_guard<std::mutex> lock(record_mu_);
  if (!judgment_id.empty()) {
    if (auto it = judgments_.find(judgment_id); it != judgments_.end()) {
      out.comparison = log_.Snapshot()[it->second - 1];
      out.log_length = log_.size();
      out.duplicate = true;
      return out;
    }
  }
  out.comparison = {winner, loser, std::chrono::system_clock::now(), session_id,
                    judgment_id};
  out.log_length = log_.Append(out.comparison);
  if (!judgment_id.empty()) judgments_.emplace(judgment_id, out.log_length);
  if (cfg_.auto_recompute_every > 0 &&
      out.log_length % cfg_.auto_recompute_every == 0) {
    RequestRecompute();
  }
  return out;
}

std::size_t Session::RecordSkip(const std::string& a, const std::string& b,
                                const std::string& session_id) {
  ValidatePair(a, b);
  const nlohmann::json record = {{"a", a},
                                 {"b", b},
                                 {"timestamp", FormatUtc(std::chrono::system_clock::now())},
                                 {"session", session_id}};
  std::lock_guard<std::mutex> lock(skip_mu_);
  skip_log_.Append(record.dump());
  return ++skips_;
}

std::shared_ptr<const ScoreSnapshot> Session::Recompute() {
  std::lock_guard<std::mutex> run(recompute_mu_);
  const std::vector<Comparison> comparisons = log_.Snapshot();
  if (comparisons.empty()) {
    throw PreconditionError("recompute needs at least one recorded comparison");
  }
  {
    std::lock_guard<std::mutex> lock(state_mu_);
    // Another caller finished a run covering this log while we waited.
    if (snapshot_ && state_ != RecomputeState::kFailed &&
        snapshot_->covered_log_length == comparisons.size()) {
      return snapshot_;
    }
    state_ = RecomputeState::kRunning;
  }

  try {
    SmoothedInterest result = RankGpCnn(store_, comparisons, cfg_.pipeline);
    auto snap = std::make_shared<ScoreSnapshot>();
    snap->scores = std::move(result.scores);
    snap->model = std::move(result.model);
    snap->covered_log_length = comparisons.size();
    snap->ep_converged = result.ep.converged;
    snap->ep_iterations = result.ep.iterations;

    std::lock_guard<std::mutex> lock(state_mu_);
    snapshot_ = std::move(snap);
    state_ = RecomputeState::kIdle;
    failure_reason_.clear();
    warning_ = snapshot_->ep_converged
                   ? std::string()
                   : "EP did not converge within " +
                         std::to_string(cfg_.pipeline.ep.max_iterations) +
                         " sweeps; scores are best effort";
    return snapshot_;
  } catch (const std::exception& e) {
    std::lock_guard<std::mutex> lock(state_mu_);
    state_ = RecomputeState::kFailed;
    failure_reason_ = e.what();
    throw;
  }
}

void Session::RequestRecompute() {
  {
    std::lock_guard<std::mutex> lock(bg_mu_);
    bg_pending_ = true;
  }
  bg_cv_.notify_all();
}

void Session::WaitForBackgroundIdle() {
  std::unique_lock<std::mutex> lock(bg_mu_);
  bg_cv_.wait(lock, [this] { return !bg_pending_ && !bg_running_; });
}

void Session::BackgroundLoop() {
  std::unique_lock<std::mutex> lock(bg_mu_);
  for (;;) {
    bg_cv_.wait(lock, [this] { return bg_stop_ || bg_pending_; });
    if (bg_stop_) return;
    bg_pending_ = false;
    bg_running_ = true;
    lock.unlock();
    try {
      Recompute();
    } catch (const std::exception&) {
      // Reflected in status().
    }
    lock.lock();
    bg_running_ = false;
    bg_cv_.notify_all();
  }
}

std::shared_ptr<const ScoreSnapshot> Session::scores() const {
  std::lock_guard<std::mutex> lock(state_mu_);
  return snapshot_;
}

SessionStatus Session::status() const {
  SessionStatus s;
  s.images = store_.size();
  s.log_length = log_.size();
  {
    std::lock_guard<std::mutex> lock(skip_mu_);
    s.skips = skips_;
  }
  std::lock_guard<std::mutex> lock(state_mu_);
  if (snapshot_) s.covered_log_length = snapshot_->covered_log_length;
  s.state = state_;
  s.failure_reason = failure_reason_;
  s.warning = warning_;
  return s;
}

}  // namespace interest
