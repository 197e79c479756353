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

#ifndef INTEREST_COMPARISON_LOG_H_
#define INTEREST_COMPARISON_LOG_H_

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "interest/ranker.h"

namespace interest {

// {"winner": ..., "loser": ..., "timestamp": "...Z", "session": ...} plus
// "judgment_id" when set.
nlohmann::json ComparisonToJson(const Comparison& c);
// Throws InvalidArgumentError on missing fields or winner == loser.
Comparison ComparisonFromJson(const nlohmann::json& j);

// Append-only line-delimited JSON file. Every Append reaches stable storage
// (write + fdatasync) before it returns, so an acknowledged record survives a
// crash. On open, a torn final line (a crash mid-append) is cut off; a
// malformed complete line is corruption and throws LoadError.
class DurableJsonlFile {
 public:
  explicit DurableJsonlFile(std::filesystem::path path);
  ~DurableJsonlFile();
  DurableJsonlFile(const DurableJsonlFile&) = delete;
  DurableJsonlFile& operator=(const DurableJsonlFile&) = delete;

  // Lines present at open time, without their newline.
  const std::vector<std::string>& initial_lines() const { return initial_lines_; }

  // Throws IoError; the file is rolled back to its previous length.
  void Append(const std::string& line);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  long long size_ = 0;
  std::vector<std::string> initial_lines_;
};

// The operator's judgments. Single writer; any number of readers.
class ComparisonLog {
 public:
  explicit ComparisonLog(std::filesystem::path path);

  // Durable before return. Returns the new log length.
  std::size_t Append(const Comparison& c);

  std::size_t size() const;
  std::vector<Comparison> Snapshot() const;
  const std::filesystem::path& path() const { return file_.path(); }

 private:
  mutable std::mutex mu_;
  DurableJsonlFile file_;
  std::vector<Comparison> entries_;
};

// Read-only replay of a comparison log file; ignores a torn final line.
std::vector<Comparison> ReadComparisonLog(const std::filesystem::path& path);

}  // namespace interest

#endif  // INTEREST_COMPARISON_LOG_H_
