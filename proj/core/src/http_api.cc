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

#include "interest/http_api.h"

#include <httplib.h>

#include <functional>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "interest/errors.h"
#include "interest/storyboard.h"

namespace interest {

namespace {

using nlohmann::json;

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response& res, int status, const std::string& message) {
  Reply(res, status, {{"error", message}});
}

json ImageRef(const FeatureStore& store, const ImageId& id) {
  const FeatureVector* fv = store.Find(id);
  return {{"id", id}, {"path", fv->path}, {"url", "/images/" + fv->path}};
}

std::size_t QueryCount(const httplib::Request& req, const std::string& key,
                       std::size_t fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string text = req.get_param_value(key);
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || value < 0) {
    throw InvalidArgumentError("query parameter '" + key + "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(value);
}

json BodyOrThrow(const httplib::Request& req) {
  try {
    json body = json::parse(req.body);
    if (!body.is_object()) throw InvalidArgumentError("request body must be a JSON object");
    return body;
  } catch (const json::parse_error& e) {
    throw InvalidArgumentError(std::string("malformed JSON body: ") + e.what());
  }
}

std::string StringField(const json& body, const std::string& key, bool required = true) {
  if (!body.contains(key)) {
    if (required) throw InvalidArgumentError("missing field '" + key + "'");
    return {};
  }
  if (!body[key].is_string()) {
    throw InvalidArgumentError("field '" + key + "' must be a string");
  }
  return body[key].get<std::string>();
}

json StatusJson(const SessionStatus& s) {
  json out = {{"images", s.images},
              {"log_length", s.log_length},
              {"skips", s.skips},
              {"covered_log_length", nullptr},
              {"recompute", RecomputeStateName(s.state)}};
  if (s.covered_log_length) out["covered_log_length"] = *s.covered_log_length;
  if (!s.failure_reason.empty()) out["reason"] = s.failure_reason;
  if (!s.warning.empty()) out["warning"] = s.warning;
  return out;
}

}  // namespace

struct ApiServer::Impl {
  Impl(Session& s, ApiOptions o) : session(s), options(std::move(o)) {}

  Session& session;
  ApiOptions options;
  httplib::Server server;
  std::thread thread;

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  // Maps library errors onto HTTP statuses.
  static httplib::Server::Handler Guard(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
      } catch (const InvalidArgumentError& e) {
        ReplyError(res, 400, e.what());
      } catch (const PreconditionError& e) {
        ReplyError(res, 409, e.what());
      } catch (const TransportError& e) {
        ReplyError(res, 502, e.what());
      } catch (const std::exception& e) {
        ReplyError(res, 500, e.what());
      }
    };
  }

  void Register() {
    const FeatureStore& store = session.store();

    server.Get("/api/pair", Guard([this, &store](const auto&, auto& res) {
      const auto [a, b] = session.NextPair();
      Reply(res, 200, {{"a", ImageRef(store, a)}, {"b", ImageRef(store, b)}});
    }));

    server.Post("/api/comparison", Guard([this](const auto& req, auto& res) {
      const json body = BodyOrThrow(req);
      const auto rec = session.RecordComparison(StringField(body, "winner"),
                                                StringField(body, "loser"),
                                                StringField(body, "session", false),
                                                StringField(body, "judgment_id", false));
      Reply(res, 200, {{"comparison", ComparisonToJson(rec.comparison)},
                       {"log_length", rec.log_length},
                       {"duplicate", rec.duplicate}});
    }));

    server.Post("/api/skip", Guard([this](const auto& req, auto& res) {
      const json body = BodyOrThrow(req);
      const std::size_t skips = session.RecordSkip(
          StringField(body, "a"), StringField(body, "b"), StringField(body, "session", false));
      Reply(res, 200, {{"skips", skips}});
    }));

    server.Post("/api/recompute", Guard([this](const auto&, auto& res) {
      session.Recompute();
      Reply(res, 200, StatusJson(session.status()));
    }));

    server.Get("/api/scores", Guard([this](const auto&, auto& res) {
      json out = json::array();
      if (auto snap = session.scores()) {
        const InterestPosterior& s = snap->scores;
        for (std::size_t i = 0; i < s.size(); ++i) {
          out.push_back({{"id", s.ids[i]}, {"mean", s.means[i]}, {"variance", s.variances[i]}});
        }
      }
      Reply(res, 200, out);
    }));

    server.Get("/api/storyboard", Guard([this, &store](const auto& req, auto& res) {
      StoryboardSpec spec;
      spec.n_images = QueryCount(req, "n", options.default_storyboard_size);
      spec.min_separation = QueryCount(req, "d", options.default_min_separation);
      const std::string method =
          req.has_param("method") ? req.get_param_value("method") : "interest";
      auto snap = session.scores();
      std::optional<ScoreMap> scores;
      if (snap) scores = ToScoreMap(snap->scores);
      std::vector<ImageId> ids;
      if (method == "interest") {
        if (!scores) throw PreconditionError("no scores yet; record judgments and recompute");
        const std::vector<ImageId> order = store.ids();
        ids = SelectTopSpaced(*scores, order, spec).ids;
      } else if (method == "cluster") {
        spec.Validate();
        ids = ClusterBaseline(store, std::min(spec.n_images, store.size()));
      } else {
        throw InvalidArgumentError("method must be 'interest' or 'cluster'");
      }
      Reply(res, 200, StoryboardManifest(store, ids, scores ? &*scores : nullptr));
    }));

    server.Get(R"(/api/saliency/([^/]+))", Guard([this, &store](const auto& req, auto& res) {
      const std::string id = req.matches[1];
      const FeatureVector* fv = store.Find(id);
      if (fv == nullptr) {
        ReplyError(res, 404, "unknown image id '" + id + "'");
        return;
      }
      if (!options.extractor_endpoint) {
        ReplyError(res, 503, "no feature-extraction endpoint configured");
        return;
      }
      auto snap = session.scores();
      if (!snap) throw PreconditionError("no scores yet; record judgments and recompute");
      OcclusionConfig cfg = options.occlusion;
      cfg.window_px = static_cast<int>(QueryCount(req, "window", static_cast<std::size_t>(cfg.window_px)));
      cfg.stride_px = static_cast<int>(QueryCount(req, "stride", static_cast<std::size_t>(cfg.stride_px)));
      cfg.Validate();
      const cv::Mat image = PrepareImage(LoadImage(store.ResolvePath(*fv)), cfg);
      HttpFeatureExtractor extractor(*options.extractor_endpoint);
      Reply(res, 200, OcclusionMap(image, id, extractor, snap->model, cfg).ToJson());
    }));

    server.Get("/api/status", Guard([this](const auto&, auto& res) {
      Reply(res, 200, StatusJson(session.status()));
    }));

    if (!store.base_dir().empty() && std::filesystem::is_directory(store.base_dir())) {
      server.set_mount_point("/images", store.base_dir().string());
    }
  }
};

ApiServer::ApiServer(Session& session, ApiOptions options)
    : impl_(std::make_unique<Impl>(session, std::move(options))) {
  impl_->Register();
}

ApiServer::~ApiServer() { Stop(); }

int ApiServer::Start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw IoError("ApiServer: cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void ApiServer::Listen(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw IoError("ApiServer: cannot listen on " + host + ":" + std::to_string(port));
  }
}

void ApiServer::Stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace interest
