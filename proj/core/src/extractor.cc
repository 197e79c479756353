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

#include "interest/extractor.h"

#include <httplib.h>
#include <openssl/evp.h>

#include <cmath>
#include <random>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "interest/errors.h"

namespace interest {

namespace {

using nlohmann::json;

// Grey-level tile means mapped to [-1, 1] around mid-grey.
Eigen::VectorXd TileLayout(const cv::Mat& image, int size, int tile) {
  cv::Mat grey;
  if (image.channels() == 3) {
    cv::cvtColor(image, grey, cv::COLOR_BGR2GRAY);
  } else if (image.channels() == 4) {
    cv::cvtColor(image, grey, cv::COLOR_BGRA2GRAY);
  } else {
    grey = image;
  }
  if (grey.rows != size || grey.cols != size) {
    cv::resize(grey, grey, cv::Size(size, size), 0, 0, cv::INTER_AREA);
  }
  const int tiles = size / tile;
  Eigen::VectorXd out(tiles * tiles);
  for (int r = 0; r < tiles; ++r) {
    for (int c = 0; c < tiles; ++c) {
      const cv::Scalar m = cv::mean(grey(cv::Rect(c * tile, r * tile, tile, tile)));
      out[r * tiles + c] = (m[0] - 128.0) / 128.0;
    }
  }
  return out;
}

json ErrorBody(const std::string& message) { return {{"error", message}}; }

}  // namespace

std::string Base64Encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string Base64Decode(std::string_view text) {
  if (text.size() % 4 != 0) {
    throw InvalidArgumentError("Base64Decode: length is not a multiple of 4");
  }
  std::string out(3 * text.size() / 4, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw InvalidArgumentError("Base64Decode: malformed input");
  std::size_t padding = 0;
  if (!text.empty() && text.back() == '=') ++padding;
  if (text.size() >= 2 && text[text.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

std::string EncodePng(const cv::Mat& image) {
  std::vector<unsigned char> buf;
  if (!cv::imencode(".png", image, buf)) {
    throw InvalidArgumentError("EncodePng: cannot encode image");
  }
  return std::string(buf.begin(), buf.end());
}

cv::Mat DecodeImage(std::string_view bytes) {
  std::vector<unsigned char> buf(bytes.begin(), bytes.end());
  cv::Mat image;
  if (!buf.empty()) image = cv::imdecode(buf, cv::IMREAD_COLOR);
  if (image.empty()) throw InvalidArgumentError("image bytes are not decodable");
  return image;
}

cv::Mat LoadImage(const std::filesystem::path& path) {
  cv::Mat image = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (image.empty()) {
    throw InvalidArgumentError("cannot decode image " + path.string());
  }
  return image;
}

HttpFeatureExtractor::HttpFeatureExtractor(std::string endpoint,
                                           int timeout_seconds)
    : endpoint_(std::move(endpoint)), timeout_seconds_(timeout_seconds) {}

Eigen::VectorXd HttpFeatureExtractor::Extract(const cv::Mat& image,
                                              const std::string& id) {
  httplib::Client client(endpoint_);
  client.set_connection_timeout(timeout_seconds_);
  client.set_read_timeout(timeout_seconds_);
  const json request = {{"id", id}, {"image_bytes", Base64Encode(EncodePng(image))}};
  auto res = client.Post("/extract", request.dump(), "application/json");
  if (!res) {
    throw TransportError("extractor " + endpoint_ + ": " +
                         httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("extractor " + endpoint_ + " returned HTTP " +
                         std::to_string(res->status) + ": " + res->body);
  }
  try {
    const json reply = json::parse(res->body);
    const auto values = reply.at("features").get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                             static_cast<Eigen::Index>(values.size()));
  } catch (const json::exception& e) {
    throw TransportError("extractor " + endpoint_ + " sent a malformed reply: " +
                         e.what());
  }
}

StoredVectorExtractor::StoredVectorExtractor(const FeatureStore& store,
                                             std::uint64_t seed,
                                             int image_size_px, int tile_px)
    : store_(store), image_size_px_(image_size_px), tile_px_(tile_px) {
  const int tiles = image_size_px / tile_px;
  const Eigen::Index dim = store.dim().value_or(0);
  projection_.resize(dim, tiles * tiles);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (Eigen::Index j = 0; j < projection_.cols(); ++j) {
    for (Eigen::Index i = 0; i < projection_.rows(); ++i) projection_(i, j) = normal(rng);
  }
  projection_ /= std::sqrt(static_cast<double>(projection_.cols()));
}

Eigen::VectorXd StoredVectorExtractor::Extract(const cv::Mat& image,
                                               const std::string& id) {
  const FeatureVector* fv = store_.Find(id);
  if (fv == nullptr) {
    throw InvalidArgumentError("StoredVectorExtractor: unknown image id '" + id + "'");
  }
  const Eigen::VectorXd layout = TileLayout(image, image_size_px_, tile_px_);
  return fv->features + 0.5 * fv->features.norm() * (projection_ * layout);
}

struct ExtractorServer::Impl {
  Impl(FeatureExtractor& e, std::filesystem::path root)
      : extractor(e), image_root(std::move(root)) {}

  FeatureExtractor& extractor;
  std::filesystem::path image_root;
  httplib::Server server;
  std::thread thread;

  json Handle(const json& request) {
    if (!request.is_object() || !request.contains("id") || !request["id"].is_string()) {
      throw InvalidArgumentError("request needs a string 'id'");
    }
    const bool has_path = request.contains("image_path");
    const bool has_bytes = request.contains("image_bytes");
    if (has_path == has_bytes) {
      throw InvalidArgumentError("request needs exactly one of image_path, image_bytes");
    }
    cv::Mat image;
    if (has_path) {
      image = LoadImage(image_root / request["image_path"].get<std::string>());
    } else {
      image = DecodeImage(Base64Decode(request["image_bytes"].get<std::string>()));
    }
    const std::string id = request["id"].get<std::string>();
    const Eigen::VectorXd features = extractor.Extract(image, id);
    return {{"id", id},
            {"features", std::vector<double>(features.begin(), features.end())}};
  }
};

ExtractorServer::ExtractorServer(FeatureExtractor& extractor,
                                 std::filesystem::path image_root)
    : impl_(std::make_unique<Impl>(extractor, std::move(image_root))) {
  impl_->server.Post("/extract", [this](const httplib::Request& req,
                                        httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::parse_error& e) {
      res.status = 400;
      res.set_content(ErrorBody(std::string("malformed JSON: ") + e.what()).dump(),
                      "application/json");
      return;
    }
    try {
      json reply;
      if (body.is_array()) {
        reply = json::array();
        for (const json& item : body) reply.push_back(impl_->Handle(item));
      } else {
        reply = impl_->Handle(body);
      }
      res.set_content(reply.dump(), "application/json");
    } catch (const InvalidArgumentError& e) {
      res.status = 400;
      res.set_content(ErrorBody(e.what()).dump(), "application/json");
    } catch (const json::exception& e) {
      res.status = 400;
      res.set_content(ErrorBody(e.what()).dump(), "application/json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(ErrorBody(e.what()).dump(), "application/json");
    }
  });
}

ExtractorServer::~ExtractorServer() { Stop(); }

int ExtractorServer::Start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw IoError("ExtractorServer: cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void ExtractorServer::Listen(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw IoError("ExtractorServer: cannot listen on " + host + ":" +
                  std::to_string(port));
  }
}

void ExtractorServer::Stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace interest
