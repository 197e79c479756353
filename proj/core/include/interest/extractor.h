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

#ifndef INTEREST_EXTRACTOR_H_
#define INTEREST_EXTRACTOR_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <opencv2/core.hpp>

#include "interest/feature_store.h"

namespace interest {

// Maps an image to a fixed-dimension feature vector. Implementations must be
// safe to call from several threads at once.
class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual Eigen::VectorXd Extract(const cv::Mat& image, const std::string& id) = 0;
};

// Client for the extraction service:
//   POST /extract {"id": ..., "image_bytes": <base64 PNG>}
//     -> {"id": ..., "features": [D reals]}
// Any transport failure or non-200 reply throws TransportError.
class HttpFeatureExtractor : public FeatureExtractor {
 public:
  // `endpoint` is "http://host:port".
  explicit HttpFeatureExtractor(std::string endpoint, int timeout_seconds = 30);
  Eigen::VectorXd Extract(const cv::Mat& image, const std::string& id) override;

 private:
  std::string endpoint_;
  int timeout_seconds_;
};

// Test and demo stand-in for the CNN: the stored vector for `id` plus a fixed
// random projection of the image's coarse grey-level layout, so occluding a
// region moves the features.
class StoredVectorExtractor : public FeatureExtractor {
 public:
  explicit StoredVectorExtractor(const FeatureStore& store,
                                 std::uint64_t seed = 7,
                                 int image_size_px = 224, int tile_px = 16);
  // Throws InvalidArgumentError for an id the store does not hold.
  Eigen::VectorXd Extract(const cv::Mat& image, const std::string& id) override;

 private:
  const FeatureStore& store_;
  int image_size_px_;
  int tile_px_;
  Eigen::MatrixXd projection_;
};

// Serves POST /extract for any FeatureExtractor. The body is one request
// object or an array of them (batched); each request carries "id" and exactly
// one of "image_path" (relative to `image_root`) or "image_bytes" (base64).
// Malformed requests get 400 and extraction failures 500, both as
// {"error": "..."}.
class ExtractorServer {
 public:
  ExtractorServer(FeatureExtractor& extractor, std::filesystem::path image_root);
  ~ExtractorServer();
  ExtractorServer(const ExtractorServer&) = delete;
  ExtractorServer& operator=(const ExtractorServer&) = delete;

  // Binds (port 0 picks a free port) and serves on a background thread.
  // Returns the bound port; throws IoError when binding fails.
  int Start(const std::string& host, int port);
  // Blocks the caller until Stop() is called from elsewhere.
  void Listen(const std::string& host, int port);
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string Base64Encode(std::string_view bytes);
// Throws InvalidArgumentError on malformed input.
std::string Base64Decode(std::string_view text);

std::string EncodePng(const cv::Mat& image);
// Throws InvalidArgumentError when the bytes are not a decodable image.
cv::Mat DecodeImage(std::string_view bytes);
cv::Mat LoadImage(const std::filesystem::path& path);

}  // namespace interest

#endif  // INTEREST_EXTRACTOR_H_
