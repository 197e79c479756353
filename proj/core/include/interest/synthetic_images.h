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

#ifndef INTEREST_SYNTHETIC_IMAGES_H_
#define INTEREST_SYNTHETIC_IMAGES_H_

#include <cstddef>
#include <filesystem>

#include <Eigen/Core>
#include <opencv2/core.hpp>

#include "interest/evaluation.h"

namespace interest {

// A size_px square BGR image whose 4x4 block colours are driven by the
// feature vector, so images with similar features look alike.
cv::Mat RenderSyntheticImage(const Eigen::Ref<const Eigen::VectorXd>& features,
                             int size_px);

// Writes one PNG per image at base_dir / record.path, creating directories.
void WriteSyntheticImages(const FeatureStore& store,
                          const std::filesystem::path& base_dir, int size_px);

}  // namespace interest

#endif  // INTEREST_SYNTHETIC_IMAGES_H_
