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

#ifndef INTEREST_GAUSSIAN_H_
#define INTEREST_GAUSSIAN_H_

namespace interest {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// One-dimensional Gaussian in natural parameters (precision and
// precision * mean). A zero precision is the flat message; it has no moment
// form but multiplies and divides like any other value.
class Gaussian1D {
 public:
  // The flat (improper uniform) message.
  constexpr Gaussian1D() = default;

  // Throws InvalidArgumentError unless variance > 0 and both are finite.
  static Gaussian1D FromMoments(double mean, double variance);
  // Throws InvalidArgumentError on negative precision, or on a non-zero
  // precision_mean paired with zero precision.
  static Gaussian1D FromNatural(double precision, double precision_mean);
  static constexpr Gaussian1D Flat() { return Gaussian1D(); }

  double precision() const { return precision_; }
  double precision_mean() const { return precision_mean_; }
  bool is_proper() const { return precision_ > 0.0; }

  // Throw NumericalError for the flat message.
  double mean() const;
  double variance() const;
  Moments ToMoments() const;

  friend bool operator==(const Gaussian1D&, const Gaussian1D&) = default;

 private:
  constexpr Gaussian1D(double precision, double precision_mean)
      : precision_(precision), precision_mean_(precision_mean) {}

  double precision_ = 0.0;
  double precision_mean_ = 0.0;
};

Gaussian1D Multiply(const Gaussian1D& a, const Gaussian1D& b);

// Throws NumericalError when a.precision() < b.precision().
Gaussian1D Divide(const Gaussian1D& a, const Gaussian1D& b);

inline Gaussian1D operator*(const Gaussian1D& a, const Gaussian1D& b) {
  return Multiply(a, b);
}
inline Gaussian1D operator/(const Gaussian1D& a, const Gaussian1D& b) {
  return Divide(a, b);
}

// Standard normal density and distribution function.
double NormalPdf(double x);
double NormalCdf(double x);

// Mean and variance corrections for conditioning a unit-variance Gaussian
// centred at t on being positive:
//   v(t) = pdf(t) / cdf(t),   w(t) = v(t) * (v(t) + t).
// The truncated variable then has mean t + v and variance 1 - w.
struct TruncationCorrection {
  double v = 0.0;
  double w = 0.0;
};

// Never returns NaN for finite t. Below t = -2 a continued fraction for the
// Mills ratio replaces the pdf/cdf quotient.
TruncationCorrection TruncationMoments(double t);

}  // namespace interest

#endif  // INTEREST_GAUSSIAN_H_
