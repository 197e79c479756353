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

#include "interest/synthetic_images.h"

#include <algorithm>
#include <cmath>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "interest/errors.h"

namespace interest {

cv::Mat RenderSyntheticImage(const Eigen::Ref<const Eigen::VectorXd>& features,
                             int size_px) {
  if (size_px < 4) throw InvalidArgumentError("RenderSyntheticImage: size below 4 px");
  if (features.size() == 0) throw InvalidArgumentError("RenderSyntheticImage: no features");
  const Eigen::VectorXd unit = features.normalized();
  const Eigen::Index dim = unit.size();
  cv::Mat small(4, 4, CV_8UC3);
  for (int cell = 0; cell < 16; ++cell) {
    cv::Vec3b& px = small.at<cv::Vec3b>(cell / 4, cell % 4);
    for (int ch = 0; ch < 3; ++ch) {
      const double v = unit[(cell * 3 + ch) % dim] * std::sqrt(static_cast<double>(dim));
      px[ch] = static_cast<unsigned char>(std::clamp(128.0 + 60.0 * v, 0.0, 255.0));
    }
  }
  cv::Mat out;
  cv::resize(small, out, cv::Size(size_px, size_px), 0, 0, cv::INTER_LINEAR);
  return out;
}

void WriteSyntheticImages(const FeatureStore& store,
                          const std::filesystem::path& base_dir, int size_px) {
  for (const FeatureVector& record : store) {
    const std::filesystem::path target = base_dir / record.path;
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    if (!cv::imwrite(target.string(), RenderSyntheticImage(record.features, size_px))) {
      throw IoError("cannot write " + target.string());
    }
  }
}

}  // namespace interest
