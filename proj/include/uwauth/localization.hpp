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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "uwauth/channel.hpp"
#include "uwauth/random.hpp"

namespace uwauth {

/// Planar coordinate in meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned deployment rectangle centred on the origin.
struct Region {
  double width_m = 1000.0;
  double height_m = 1000.0;

  bool contains(const Point& p) const;
};

/// Reference nodes with known positions. At least three, not collinear.
class AnchorArray {
 public:
  explicit AnchorArray(std::vector<Point> anchors);

  std::size_t size() const { return anchors_.size(); }
  const Point& operator[](std::size_t i) const { return anchors_[i]; }
  std::span<const Point> points() const { return anchors_; }
  auto begin() const { return anchors_.begin(); }
  auto end() const { return anchors_.end(); }

 private:
  std::vector<Point> anchors_;
};

/// The legitimate node (Alice), a fixed impersonator (Eve), the anchors that
/// localize them and the acoustic channel between them.
struct Scenario {
  AnchorArray anchors;
  Point alice;
  Point eve;
  ChannelParams channel;
  Region region;

  /// Re-checks channel invariants, region membership and non-zero
  /// anchor-to-node distances. Throws DomainError / DegenerateGeometryError.
  void validate() const;

  Scenario with_power(double power_db) const;
  Scenario with_eve(Point p) const;
};

/// Anchors and defaults of the reference underwater deployment: a
/// 1000 m x 1000 m area, Alice at the origin, Eve at (100, 100).
Scenario reference_scenario(double power_db = 60.0);

/// Range observation at one anchor.
struct RangeObservation {
  double true_distance = 0.0;  ///< m
  double noise_std = 0.0;      ///< m
  double observed_sq = 0.0;    ///< m^2
};

using NoisySquaredDistances = std::vector<RangeObservation>;

enum class NoiseModel {
  /// d^2 + 2 n d, the high-SNR expansion that the detector analysis uses.
  Linearized,
  /// (d + n)^2.
  Exact,
};

struct SamplingOptions {
  NoiseModel model = NoiseModel::Linearized;
  /// Forces sigma = 0 at every anchor (the infinite-power limit).
  bool noiseless = false;
};

double true_distance(const Point& point, const Point& anchor);

/// Per-anchor range standard deviation for a transmitter at `point`.
std::vector<double> noise_std_per_anchor(const Point& point, const AnchorArray& anchors,
                                         const ChannelParams& channel);

/// Builds observations from explicit range errors `noise_m` (meters).
NoisySquaredDistances observe_squared_distances(const Point& point, const AnchorArray& anchors,
                                                std::span<const double> noise_std,
                                                std::span<const double> noise_m,
                                                NoiseModel model = NoiseModel::Linearized);

/// Draws n_i ~ N(0, sigma_i^2) per anchor and returns the noisy squared ranges.
NoisySquaredDistances sample_noisy_squared_distances(const Point& point,
                                                     const AnchorArray& anchors,
                                                     const ChannelParams& channel, Rng& rng,
                                                     const SamplingOptions& options = {});

/// Linear model A X = b in the lifted unknown X = (x, y, x^2 + y^2).
struct LinearSystem {
  Eigen::MatrixXd A;  ///< L x 3, rows -2 [x_i, y_i, -0.5]
  Eigen::VectorXd b;  ///< d_i^2 - x_i^2 - y_i^2
};

Eigen::MatrixXd design_matrix(const AnchorArray& anchors);

LinearSystem build_system(const AnchorArray& anchors, std::span<const double> observed_sq);
LinearSystem build_system(const AnchorArray& anchors, const NoisySquaredDistances& observed);

/// Least-squares solution of A X = b by column-pivoted Householder QR.
Eigen::Vector3d solve_position(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

inline Point planar(const Eigen::Vector3d& lifted) { return {lifted(0), lifted(1)}; }

/// The lifted coordinate of a point, (x, y, x^2 + y^2).
inline Eigen::Vector3d lift(const Point& p) { return {p.x, p.y, p.x * p.x + p.y * p.y}; }

/// |X3 - (X1^2 + X2^2)|.
double consistency_gap(const Eigen::Vector3d& lifted);

}  // namespace uwauth
