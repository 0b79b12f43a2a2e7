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

#include "uwauth/localization.hpp"

#include <cmath>
#include <string>

#include "uwauth/error.hpp"

namespace uwauth {

namespace {

// Collinear anchors make the design matrix rank deficient.
constexpr double kRankTolerance = 1e-9;

void check_full_rank(const Eigen::MatrixXd& A) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  if (!(s(s.size() - 1) > kRankTolerance * s(0))) {
    throw DegenerateGeometryError("anchor design matrix is rank deficient (collinear anchors)");
  }
}

}  // namespace

bool Region::contains(const Point& p) const {
  return std::abs(p.x) <= 0.5 * width_m && std::abs(p.y) <= 0.5 * height_m;
}

AnchorArray::AnchorArray(std::vector<Point> anchors) : anchors_(std::move(anchors)) {
  if (anchors_.size() < 3) {
    throw DegenerateGeometryError("at least 3 anchors are required, got " +
                                  std::to_string(anchors_.size()));
  }
  for (const auto& a : anchors_) {
    if (!std::isfinite(a.x) || !std::isfinite(a.y)) {
      throw DomainError("anchor coordinates must be finite");
    }
  }
  check_full_rank(design_matrix(*this));
}

void Scenario::validate() const {
  channel.validate();
  if (!(region.width_m > 0.0) || !(region.height_m > 0.0)) {
    throw DomainError("region dimensions must be positive");
  }
  if (!region.contains(alice)) throw DomainError("alice lies outside the deployment region");
  if (!region.contains(eve)) throw DomainError("eve lies outside the deployment region");
  for (const auto& a : anchors) {
    true_distance(alice, a);
    true_distance(eve, a);
  }
}

Scenario Scenario::with_power(double power_db) const {
  Scenario copy = *this;
  copy.channel.transmit_power_db = power_db;
  return copy;
}

Scenario Scenario::with_eve(Point p) const {
  Scenario copy = *this;
  copy.eve = p;
  return copy;
}

Scenario reference_scenario(double power_db) {
  ChannelParams channel;
  channel.transmit_power_db = power_db;
  return Scenario{AnchorArray({{0.0, 500.0}, {-500.0, -500.0}, {-500.0, 500.0}}),
                  {0.0, 0.0},
                  {100.0, 100.0},
                  channel,
                  Region{1000.0, 1000.0}};
}

double true_distance(const Point& point, const Point& anchor) {
  const double d = std::hypot(point.x - anchor.x, point.y - anchor.y);
  if (!(d > 0.0)) throw DegenerateGeometryError("node coincides with an anchor");
  return d;
}

std::vector<double> noise_std_per_anchor(const Point& point, const AnchorArray& anchors,
                                         const ChannelParams& channel) {
  std::vector<double> out;
  out.reserve(anchors.size());
  for (const auto& a : anchors) {
    out.push_back(std::sqrt(distance_noise_variance(true_distance(point, a), channel)));
  }
  return out;
}

NoisySquaredDistances observe_squared_distances(const Point& point, const AnchorArray& anchors,
                                                std::span<const double> noise_std,
                                                std::span<const double> noise_m,
                                                NoiseModel model) {
  if (noise_std.size() != anchors.size() || noise_m.size() != anchors.size()) {
    throw std::invalid_argument("noise vectors must have one entry per anchor");
  }
  NoisySquaredDistances out(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double d = true_distance(point, anchors[i]);
    const double n = noise_m[i];
    out[i].true_distance = d;
    out[i].noise_std = noise_std[i];
    out[i].observed_sq = model == NoiseModel::Linearized ? d * d + 2.0 * n * d : (d + n) * (d + n);
  }
  return out;
}

NoisySquaredDistances sample_noisy_squared_distances(const Point& point,
                                                     const AnchorArray& anchors,
                                                     const ChannelParams& channel, Rng& rng,
                                                     const SamplingOptions& options) {
  std::vector<double> sigma = options.noiseless ? std::vector<double>(anchors.size(), 0.0)
                                                : noise_std_per_anchor(point, anchors, channel);
  std::vector<double> noise(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) noise[i] = sigma[i] * rng.normal();
  return observe_squared_distances(point, anchors, sigma, noise, options.model);
}

Eigen::MatrixXd design_matrix(const AnchorArray& anchors) {
  Eigen::MatrixXd A(anchors.size(), 3);
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    A(row, 0) = -2.0 * anchors[i].x;
    A(row, 1) = -2.0 * anchors[i].y;
    A(row, 2) = 1.0;
  }
  return A;
}

LinearSystem build_system(const AnchorArray& anchors, std::span<const double> observed_sq) {
  if (observed_sq.size() != anchors.size()) {
    throw std::invalid_argument("one squared distance per anchor is required");
  }
  LinearSystem sys{design_matrix(anchors), Eigen::VectorXd(anchors.size())};
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const auto& a = anchors[i];
    sys.b(static_cast<Eigen::Index>(i)) = observed_sq[i] - a.x * a.x - a.y * a.y;
  }
  return sys;
}

LinearSystem build_system(const AnchorArray& anchors, const NoisySquaredDistances& observed) {
  std::vector<double> sq;
  sq.reserve(observed.size());
  for (const auto& o : observed) sq.push_back(o.observed_sq);
  return build_system(anchors, sq);
}

Eigen::Vector3d solve_position(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.cols() != 3 || A.rows() != b.size() || A.rows() < 3) {
    throw std::invalid_argument("solve_position expects an L x 3 system with L >= 3");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(kRankTolerance);
  if (qr.rank() < 3) throw DegenerateGeometryError("design matrix is rank deficient");
  return qr.solve(b);
}

double consistency_gap(const Eigen::Vector3d& lifted) {
  return std::abs(lifted(2) - (lifted(0) * lifted(0) + lifted(1) * lifted(1)));
}

}  // namespace uwauth
