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

#ifndef INTEREST_HTTP_API_H_
#define INTEREST_HTTP_API_H_

#include <memory>
#include <optional>
#include <string>

#include "interest/saliency.h"
#include "interest/session.h"

namespace interest {

struct ApiOptions {
  // Feature-extraction service for saliency requests ("http://host:port").
  std::optional<std::string> extractor_endpoint;
  OcclusionConfig occlusion;
  std::size_t default_storyboard_size = 24;
  std::size_t default_min_separation = 50;
};

// JSON HTTP API over a Session:
//   GET  /api/pair                    {a: {id, path, url}, b: {id, path, url}}
//   POST /api/comparison              {winner, loser, session, judgment_id?}
//   POST /api/skip                    {a, b, session}
//   POST /api/recompute
//   GET  /api/scores                  [{id, mean, variance}]
//   GET  /api/storyboard?n=&d=&method=interest|cluster
//   GET  /api/saliency/{id}?window=&stride=
//   GET  /api/status
//   GET  /images/...                  files under the feature file directory
// GET handlers never modify the session.
class ApiServer {
 public:
  ApiServer(Session& session, ApiOptions options);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Serves on a background thread; port 0 picks a free port. Returns the
  // bound port or throws IoError.
  int Start(const std::string& host, int port);
  // Serves on the calling thread until Stop().
  void Listen(const std::string& host, int port);
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace interest

#endif  // INTEREST_HTTP_API_H_
