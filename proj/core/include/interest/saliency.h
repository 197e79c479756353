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

#ifndef INTEREST_SALIENCY_H_
#define INTEREST_SALIENCY_H_

#include <string>

#include <Eigen/Core>
#include <nlohmann/json.hpp>
#include <opencv2/core.hpp>

#include "interest/extractor.h"
#include "interest/gp_smoother.h"

namespace interest {

struct OcclusionConfig {
  int window_px = 16;
  int stride_px = 16;
  int image_size_px = 224;
  int blank_value = 128;
  // Extractor calls in flight at once.
  int parallelism = 1;

  // Throws InvalidArgumentError unless 1 <= window <= image_size,
  // stride >= 1, blank in [0, 255] and parallelism >= 1.
  void Validate() const;
  int rows() const { return (image_size_px - window_px) / stride_px + 1; }
  int cols() const { return rows(); }
};

// deltas(r, c) = interest with window (r, c) blanked - interest of the
// original. Negative cells held something that raised interest.
struct SaliencyMap {
  Eigen::MatrixXd deltas;
  OcclusionConfig config;
  double base_interest = 0.0;

  int rows() const { return static_cast<int>(deltas.rows()); }
  int cols() const { return static_cast<int>(deltas.cols()); }

  // {rows, cols, base_interest, deltas: [[...]], config: {...}}
  nlohmann::json ToJson() const;
  static SaliencyMap FromJson(const nlohmann::json& j);
};

// Copy of `image` with the window at grid cell (row, col) filled with the
// blank value.
cv::Mat OccludeCell(const cv::Mat& image, int row, int col,
                    const OcclusionConfig& cfg);

// Blanks every window position in turn and records the change in predicted
// interest mean: one baseline extraction plus rows * cols occluded ones. The
// image must already be image_size_px square (InvalidArgumentError
// otherwise). Extractor failures surface as TransportError naming the cell.
SaliencyMap OcclusionMap(const cv::Mat& image, const std::string& image_id,
                         FeatureExtractor& extractor, const GpModel& model,
                         const OcclusionConfig& cfg = {});

// Alpha overlay of the delta grid, bilinearly upsampled from window centres:
// red where blanking lost interest, blue where it gained, opacity
// proportional to |delta| / max |delta|. An all-zero map returns the input
// unchanged. Throws InvalidArgumentError when the image size does not match
// the map geometry.
cv::Mat RenderOverlay(const SaliencyMap& map, const cv::Mat& image,
                      double max_alpha = 0.6);

// Decodes and resizes to cfg.image_size_px square (8-bit BGR).
cv::Mat PrepareImage(const cv::Mat& image, const OcclusionConfig& cfg);

}  // namespace interest

#endif  // INTEREST_SALIENCY_H_
