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

#include "interest/gaussian.h"

#include <cmath>
#include <numbers>
#include <string>

#include "interest/errors.h"

namespace interest {

namespace {

// Below this the direct pdf / cdf ratio loses digits (the erfc argument is
// rounded and w cancels); the continued fraction is exact to rounding there.
constexpr double kContinuedFractionThreshold = -2.0;
constexpr int kContinuedFractionTerms = 120;

}  // namespace

Gaussian1D Gaussian1D::FromMoments(double mean, double variance) {
  if (!std::isfinite(mean) || !std::isfinite(variance) || variance <= 0.0) {
    throw InvalidArgumentError("Gaussian1D::FromMoments: need finite mean and "
                               "finite positive variance, got mean=" +
                               std::to_string(mean) +
                               " variance=" + std::to_string(variance));
  }
  const double precision = 1.0 / variance;
  return Gaussian1D(precision, mean * precision);
}

Gaussian1D Gaussian1D::FromNatural(double precision, double precision_mean) {
  if (!std::isfinite(precision) || !std::isfinite(precision_mean) ||
      precision < 0.0) {
    throw InvalidArgumentError("Gaussian1D::FromNatural: invalid precision " +
                               std::to_string(precision));
  }
  if (precision == 0.0 && precision_mean != 0.0) {
    throw InvalidArgumentError(
        "Gaussian1D::FromNatural: flat message must have zero precision_mean");
  }
  return Gaussian1D(precision, precision_mean);
}

double Gaussian1D::mean() const {
  if (!is_proper()) throw NumericalError("Gaussian1D: flat message has no mean");
  return precision_mean_ / precision_;
}

double Gaussian1D::variance() const {
  if (!is_proper()) {
    throw NumericalError("Gaussian1D: flat message has no variance");
  }
  return 1.0 / precision_;
}

Moments Gaussian1D::ToMoments() const { return {mean(), variance()}; }

Gaussian1D Multiply(const Gaussian1D& a, const Gaussian1D& b) {
  return Gaussian1D::FromNatural(a.precision() + b.precision(),
                                 a.precision_mean() + b.precision_mean());
}

Gaussian1D Divide(const Gaussian1D& a, const Gaussian1D& b) {
  const double precision = a.precision() - b.precision();
  if (precision < 0.0) {
    throw NumericalError("Gaussian1D: division leaves negative precision " +
                         std::to_string(precision));
  }
  if (precision == 0.0) return Gaussian1D::Flat();
  return Gaussian1D::FromNatural(precision,
                                 a.precision_mean() - b.precision_mean());
}

double NormalPdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double NormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

TruncationCorrection TruncationMoments(double t) {
  if (!std::isfinite(t)) {
    throw InvalidArgumentError("TruncationMoments: t must be finite");
  }
  if (t < kContinuedFractionThreshold) {
    // Laplace's continued fraction for the Mills ratio of x = -t:
    //   1 / R(x) = x + c,  c = 1 / (x + 2 / (x + 3 / (x + ...))).
    // v = x + c and v + t = c, so w never suffers the cancellation that
    // v * (v + t) would hit when both factors come from pdf / cdf.
    const double x = -t;
    double c = 0.0;
    for (int k = kContinuedFractionTerms; k >= 1; --k) c = k / (x + c);
    return {x + c, (x + c) * c};
  }
  const double v = NormalPdf(t) / NormalCdf(t);
  return {v, v * (v + t)};
}

}  // namespace interest
