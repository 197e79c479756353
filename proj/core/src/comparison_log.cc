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

#include "interest/comparison_log.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>

#include "interest/errors.h"
#include "interest/time_util.h"

namespace interest {

namespace {

using nlohmann::json;

std::string ErrnoText(const std::string& what, const std::filesystem::path& p) {
  return what + " " + p.string() + ": " + std::strerror(errno);
}

// Splits complete lines; returns the byte length they cover.
std::size_t CompleteLines(const std::string& content,
                          std::vector<std::string>& lines) {
  std::size_t start = 0;
  for (;;) {
    const std::size_t nl = content.find('\n', start);
    if (nl == std::string::npos) return start;
    lines.push_back(content.substr(start, nl - start));
    start = nl + 1;
  }
}

std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Best effort: the append already failed and is reported as such.
void RollBack(int fd, long long size) {
  if (::ftruncate(fd, static_cast<off_t>(size)) != 0) return;
}

bool Blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

Comparison ParseLine(const std::string& line, std::size_t lineno,
                     const std::filesystem::path& path) {
  try {
    return ComparisonFromJson(json::parse(line));
  } catch (const std::exception& e) {
    throw LoadError("comparison log " + path.string() + " line " +
                        std::to_string(lineno) + ": " + e.what(),
                    lineno);
  }
}

}  // namespace

json ComparisonToJson(const Comparison& c) {
  json out = {{"winner", c.winner_id},
              {"loser", c.loser_id},
              {"timestamp", FormatUtc(c.timestamp)},
              {"session", c.session_id}};
  if (!c.judgment_id.empty()) out["judgment_id"] = c.judgment_id;
  return out;
}

Comparison ComparisonFromJson(const json& j) {
  Comparison c;
  try {
    c.winner_id = j.at("winner").get<std::string>();
    c.loser_id = j.at("loser").get<std::string>();
    c.timestamp = ParseUtc(j.at("timestamp").get<std::string>());
    c.session_id = j.value("session", std::string());
    c.judgment_id = j.value("judgment_id", std::string());
  } catch (const json::exception& e) {
    throw InvalidArgumentError(std::string("comparison record: ") + e.what());
  }
  if (c.winner_id == c.loser_id) {
    throw InvalidArgumentError("comparison record: winner equals loser");
  }
  return c;
}

DurableJsonlFile::DurableJsonlFile(std::filesystem::path path)
    : path_(std::move(path)) {
  const bool existed = std::filesystem::exists(path_);
  const std::string content = existed ? ReadAll(path_) : std::string();
  const std::size_t complete = CompleteLines(content, initial_lines_);

  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw IoError(ErrnoText("cannot open", path_));
  if (complete != content.size()) {
    if (::ftruncate(fd_, static_cast<off_t>(complete)) != 0 || ::fdatasync(fd_) != 0) {
      const std::string msg = ErrnoText("cannot repair torn tail of", path_);
      ::close(fd_);
      throw IoError(msg);
    }
  }
  size_ = static_cast<long long>(complete);
  if (!existed) {
    // Make the new directory entry itself durable.
    const auto dir = path_.has_parent_path() ? path_.parent_path()
                                             : std::filesystem::path(".");
    const int dfd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
    if (dfd >= 0) {
      ::fsync(dfd);
      ::close(dfd);
    }
  }
}

DurableJsonlFile::~DurableJsonlFile() {
  if (fd_ >= 0) ::close(fd_);
}

void DurableJsonlFile::Append(const std::string& line) {
  const std::string record = line + '\n';
  std::size_t written = 0;
  while (written < record.size()) {
    const ssize_t n = ::pwrite(fd_, record.data() + written, record.size() - written,
                               static_cast<off_t>(size_ + static_cast<long long>(written)));
    if (n < 0) {
      if (errno == EINTR) continue;
      const std::string msg = ErrnoText("append failed on", path_);
      RollBack(fd_, size_);
      throw IoError(msg);
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fdatasync(fd_) != 0) {
    const std::string msg = ErrnoText("fdatasync failed on", path_);
    RollBack(fd_, size_);
    throw IoError(msg);
  }
  size_ += static_cast<long long>(record.size());
}

ComparisonLog::ComparisonLog(std::filesystem::path path) : file_(std::move(path)) {
  const auto& lines = file_.initial_lines();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Blank(lines[i])) continue;
    entries_.push_back(ParseLine(lines[i], i + 1, file_.path()));
  }
}

std::size_t ComparisonLog::Append(const Comparison& c) {
  if (c.winner_id == c.loser_id) {
    throw InvalidArgumentError("ComparisonLog: winner equals loser");
  }
  std::lock_guard<std::mutex> lock(mu_);
  file_.Append(ComparisonToJson(c).dump());
  entries_.push_back(c);
  return entries_.size();
}

std::size_t ComparisonLog::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

std::vector<Comparison> ComparisonLog::Snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_;
}

std::vector<Comparison> ReadComparisonLog(const std::filesystem::path& path) {
  const std::string content = ReadAll(path);
  std::vector<std::string> lines;
  CompleteLines(content, lines);
  std::vector<Comparison> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Blank(lines[i])) continue;
    out.push_back(ParseLine(lines[i], i + 1, path));
  }
  return out;
}

}  // namespace interest
