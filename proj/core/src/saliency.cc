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

#include "interest/saliency.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include <opencv2/imgproc.hpp>

#include "interest/errors.h"

namespace interest {

namespace {

// Linear interpolation weights for pixel `x` on a grid whose samples sit at
// offset + k * stride, clamped at both ends.
struct Lerp {
  int lo;
  int hi;
  double t;
};

Lerp GridLerp(int x, double offset, double stride, int n) {
  double u = (x - offset) / stride;
  u = std::clamp(u, 0.0, static_cast<double>(n - 1));
  const int lo = static_cast<int>(std::floor(u));
  const int hi = std::min(lo + 1, n - 1);
  return {lo, hi, u - lo};
}

}  // namespace

void OcclusionConfig::Validate() const {
  if (window_px < 1 || window_px > image_size_px) {
    throw InvalidArgumentError("OcclusionConfig: need 1 <= window <= image size");
  }
  if (stride_px < 1) throw InvalidArgumentError("OcclusionConfig: stride must be >= 1");
  if (blank_value < 0 || blank_value > 255) {
    throw InvalidArgumentError("OcclusionConfig: blank value must lie in [0, 255]");
  }
  if (parallelism < 1) {
    throw InvalidArgumentError("OcclusionConfig: parallelism must be >= 1");
  }
}

nlohmann::json SaliencyMap::ToJson() const {
  nlohmann::json grid = nlohmann::json::array();
  for (Eigen::Index r = 0; r < deltas.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < deltas.cols(); ++c) row.push_back(deltas(r, c));
    grid.push_back(std::move(row));
  }
  return {{"rows", rows()},
          {"cols", cols()},
          {"base_interest", base_interest},
          {"deltas", grid},
          {"config",
           {{"window", config.window_px},
            {"stride", config.stride_px},
            {"image_size", config.image_size_px},
            {"blank_value", config.blank_value}}}};
}

SaliencyMap SaliencyMap::FromJson(const nlohmann::json& j) {
  SaliencyMap map;
  try {
    const auto& cfg = j.at("config");
    map.config.window_px = cfg.at("window").get<int>();
    map.config.stride_px = cfg.at("stride").get<int>();
    map.config.image_size_px = cfg.at("image_size").get<int>();
    map.config.blank_value = cfg.value("blank_value", 128);
    map.base_interest = j.at("base_interest").get<double>();
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const auto& grid = j.at("deltas");
    if (static_cast<int>(grid.size()) != rows) {
      throw InvalidArgumentError("saliency map JSON: deltas has wrong row count");
    }
    map.deltas.resize(rows, cols);
    for (int r = 0; r < rows; ++r) {
      if (static_cast<int>(grid[r].size()) != cols) {
        throw InvalidArgumentError("saliency map JSON: ragged deltas");
      }
      for (int c = 0; c < cols; ++c) map.deltas(r, c) = grid[r][c].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError(std::string("saliency map JSON: ") + e.what());
  }
  map.config.Validate();
  if (map.rows() != map.config.rows() || map.cols() != map.config.cols()) {
    throw InvalidArgumentError("saliency map JSON: grid does not match config");
  }
  return map;
}

cv::Mat OccludeCell(const cv::Mat& image, int row, int col,
                    const OcclusionConfig& cfg) {
  cv::Mat out = image.clone();
  const cv::Rect window(col * cfg.stride_px, row * cfg.stride_px, cfg.window_px,
                        cfg.window_px);
  out(window).setTo(cv::Scalar::all(cfg.blank_value));
  return out;
}

cv::Mat PrepareImage(const cv::Mat& image, const OcclusionConfig& cfg) {
  if (image.empty()) throw InvalidArgumentError("PrepareImage: empty image");
  cv::Mat bgr;
  if (image.channels() == 1) {
    cv::cvtColor(image, bgr, cv::COLOR_GRAY2BGR);
  } else if (image.channels() == 4) {
    cv::cvtColor(image, bgr, cv::COLOR_BGRA2BGR);
  } else {
    bgr = image;
  }
  if (bgr.depth() != CV_8U) {
    throw InvalidArgumentError("PrepareImage: expected an 8-bit image");
  }
  if (bgr.rows != cfg.image_size_px || bgr.cols != cfg.image_size_px) {
    cv::resize(bgr, bgr, cv::Size(cfg.image_size_px, cfg.image_size_px), 0, 0,
               cv::INTER_AREA);
  }
  return bgr;
}

SaliencyMap OcclusionMap(const cv::Mat& image, const std::string& image_id,
                         FeatureExtractor& extractor, const GpModel& model,
                         const OcclusionConfig& cfg) {
  cfg.Validate();
  if (image.empty()) throw InvalidArgumentError("OcclusionMap: empty image");
  if (image.rows != cfg.image_size_px || image.cols != cfg.image_size_px) {
    throw InvalidArgumentError("OcclusionMap: image must be " +
                               std::to_string(cfg.image_size_px) + " px square");
  }

  SaliencyMap map;
  map.config = cfg;
  try {
    map.base_interest = model.Predict(extractor.Extract(image, image_id)).mean;
  } catch (const TransportError& e) {
    throw TransportError("baseline extraction for '" + image_id + "': " + e.what());
  }

  const int rows = cfg.rows();
  const int cols = cfg.cols();
  const int cells = rows * cols;
  map.deltas.resize(rows, cols);

  std::atomic<int> next{0};
  std::mutex error_mu;
  int failed_cell = cells;
  std::exception_ptr failure;

  const auto worker = [&] {
    for (int cell = next++; cell < cells; cell = next++) {
      const int r = cell / cols;
      const int c = cell % cols;
      try {
        const Eigen::VectorXd f = extractor.Extract(OccludeCell(image, r, c, cfg), image_id);
        map.deltas(r, c) = model.Predict(f).mean - map.base_interest;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (cell < failed_cell) {
          failed_cell = cell;
          failure = std::current_exception();
        }
      }
    }
  };

  const int threads = std::min(cfg.parallelism, cells);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  if (failure) {
    const std::string where = "cell (" + std::to_string(failed_cell / cols) + ", " +
                              std::to_string(failed_cell % cols) + ")";
    try {
      std::rethrow_exception(failure);
    } catch (const TransportError& e) {
      throw TransportError("occlusion " + where + " of '" + image_id + "': " + e.what());
    }
  }
  return map;
}

cv::Mat RenderOverlay(const SaliencyMap& map, const cv::Mat& image,
                      double max_alpha) {
  const OcclusionConfig& cfg = map.config;
  if (image.empty() || image.rows != cfg.image_size_px ||
      image.cols != cfg.image_size_px) {
    throw InvalidArgumentError("RenderOverlay: image is not " +
                               std::to_string(cfg.image_size_px) + " px square");
  }
  if (map.rows() != cfg.rows() || map.cols() != cfg.cols() || map.rows() < 1) {
    throw InvalidArgumentError("RenderOverlay: grid shape does not match config");
  }
  if (image.type() != CV_8UC3) {
    throw InvalidArgumentError("RenderOverlay: expected an 8-bit BGR image");
  }

  const double peak = map.deltas.cwiseAbs().maxCoeff();
  cv::Mat out = image.clone();
  if (peak == 0.0) return out;

  // Normalize before interpolating so a uniformly rescaled grid lands on the
  // same values.
  const Eigen::MatrixXd unit = map.deltas / peak;
  const double offset = cfg.window_px / 2.0 - 0.5;
  const double stride = cfg.stride_px;

  std::vector<Lerp> col_lerp(static_cast<std::size_t>(image.cols));
  for (int x = 0; x < image.cols; ++x) col_lerp[x] = GridLerp(x, offset, stride, map.cols());

  for (int y = 0; y < image.rows; ++y) {
    const Lerp ry = GridLerp(y, offset, stride, map.rows());
    auto* px = out.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.cols; ++x) {
      const Lerp& rx = col_lerp[x];
      const double top = (1.0 - rx.t) * unit(ry.lo, rx.lo) + rx.t * unit(ry.lo, rx.hi);
      const double bottom = (1.0 - rx.t) * unit(ry.hi, rx.lo) + rx.t * unit(ry.hi, rx.hi);
      const double value = (1.0 - ry.t) * top + ry.t * bottom;
      if (value == 0.0) continue;
      const double alpha = max_alpha * std::min(std::abs(value), 1.0);
      // BGR: negative deltas tint red, positive blue.
      const cv::Vec3d tint = value < 0.0 ? cv::Vec3d(0, 0, 255) : cv::Vec3d(255, 0, 0);
      for (int ch = 0; ch < 3; ++ch) {
        const double blended = (1.0 - alpha) * px[x][ch] + alpha * tint[ch];
        px[x][ch] = cv::saturate_cast<uchar>(blended);
      }
    }
  }
  return out;
}

}  // namespace interest
