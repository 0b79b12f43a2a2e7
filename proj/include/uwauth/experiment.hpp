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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uwauth/authentication.hpp"

namespace uwauth {

struct SweepSpec {
  /// Scenario template; its transmit power is replaced by each grid value.
  Scenario scenario;
  std::vector<double> power_grid_db;
  std::vector<double> thresholds;
  /// Monte Carlo packets per hypothesis and grid point; 0 = analytic only.
  std::uint64_t trials_per_point = 0;
  std::uint64_t master_seed = 0;
  EveMode eve_mode = EveMode::Fixed;
  /// Number of Eve positions averaged by the analytic P_md in uniform mode.
  std::size_t analytic_eve_points = 1000;
  /// Grid points evaluated concurrently; 0 = hardware concurrency.
  unsigned workers = 1;

  void validate() const;
};

struct SweepRow {
  double power_db = 0.0;
  double threshold = 0.0;
  std::optional<double> p_fa_analytic;
  std::optional<double> p_md_analytic;
  std::optional<double> p_fa_empirical;
  std::optional<double> p_md_empirical;
  std::optional<double> stderr_fa;
  std::optional<double> stderr_md;
  /// Set when the row could not be evaluated; the sweep continues.
  std::optional<std::string> error;
};

struct RocPoint {
  double p_fa = 0.0;
  double p_d = 0.0;
};

/// start, start + step, ... up to and including stop.
std::vector<double> power_grid(double start, double stop, double step);

/// Thresholds at the given quantile levels of the H0 statistic, evaluated at
/// a reference transmit power.
std::vector<double> h0_quantile_thresholds(const Scenario& scenario,
                                           std::span<const double> quantile_levels,
                                           double at_power_db);

/// First `count` points of the (2, 3) Halton sequence spread over the region.
std::vector<Point> quasi_random_points(const Region& region, std::size_t count);

/// Missed-detection probability averaged over the given Eve positions.
double p_md_analytic_averaged(const Scenario& scenario, const DecisionConfig& config,
                              std::span<const Point> eve_positions);

/// One row per (power, threshold), power-major, in grid order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Operating points for thresholds at H0 quantile levels k / (n_points - 1),
/// ordered by increasing false-alarm probability.
std::vector<RocPoint> roc_curve(const Scenario& scenario, double power_db, std::size_t n_points);

}  // namespace uwauth
