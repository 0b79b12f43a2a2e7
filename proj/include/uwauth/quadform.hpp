/*
 * Copyright 2026 The uwauth Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <vector>

#include "uwauth/random.hpp"

namespace uwauth {

/// One summand (scale * Z + offset)^2 of a Gaussian quadratic form.
struct QuadTerm {
  double scale = 1.0;   ///< a_i > 0
  double offset = 0.0;  ///< delta_i
};

/// Law of Q = sum_i (a_i Z_i + delta_i)^2 with Z_i i.i.d. standard normal,
/// i.e. a weighted sum of noncentral chi-square(1) variables with weights
/// a_i^2 and noncentralities (delta_i / a_i)^2.
class QuadFormDist {
 public:
  explicit QuadFormDist(std::vector<QuadTerm> terms);

  const std::vector<QuadTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  double mean() const;
  double variance() const;

  /// One draw of Q.
  double sample(Rng& rng) const;

  /// P(Q <= x) to an absolute accuracy of 1e-6, by inverting the Laplace
  /// transform along a contour through the saddle point. Throws
  /// NumericalAccuracyError if the quadrature cannot certify the accuracy.
  double cdf(double x) const;

  /// Same probability by Imhof's real-axis inversion of the characteristic
  /// function,
  ///   P(Q <= x) = 1/2 - (1/pi) int_0^inf sin(theta(u)) / (u rho(u)) du,
  /// taken on the real axis up to a cut point U and along the ray U - i s
  /// beyond it. An independent route for cross-checking; it cannot always
  /// certify far-tail arguments when the weights are very unequal.
  double cdf_imhof(double x) const;

  /// Smallest x with |cdf(x) - p| <= 1e-6, by bracketing and bisection.
  /// Throws DomainError unless 0 < p < 1.
  double quantile(double p) const;

  QuadFormDist scaled(double s) const;

 private:
  std::vector<QuadTerm> terms_;
};

}  // namespace uwauth
