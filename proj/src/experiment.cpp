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

#include "uwauth/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "uwauth/error.hpp"

namespace uwauth {

namespace {

double radical_inverse(std::size_t index, std::size_t base) {
  double result = 0.0;
  double fraction = 1.0 / static_cast<double>(base);
  while (index > 0) {
    result += static_cast<double>(index % base) * fraction;
    index /= base;
    fraction /= static_cast<double>(base);
  }
  return result;
}

SweepRow evaluate_row(const SweepSpec& spec, double power_db, double threshold,
                      std::span<const Point> eve_positions) {
  SweepRow row;
  row.power_db = power_db;
  row.threshold = threshold;
  try {
    const Scenario scenario = spec.scenario.with_power(power_db);
    const DecisionConfig config{threshold};
    row.p_fa_analytic = p_fa_analytic(scenario, config);
    row.p_md_analytic = spec.eve_mode == EveMode::Fixed
                            ? p_md_analytic(scenario, config)
                            : p_md_analytic_averaged(scenario, config, eve_positions);
    if (spec.trials_per_point > 0) {
      EmpiricalOptions options;
      options.eve_mode = spec.eve_mode;
      const ErrorRates rates =
          empirical_rates(scenario, config, spec.trials_per_point, spec.master_seed, options);
      row.p_fa_empirical = rates.p_fa;
      row.p_md_empirical = rates.p_md;
      row.stderr_fa = rates.stderr_fa;
      row.stderr_md = rates.stderr_md;
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

void SweepSpec::validate() const {
  scenario.validate();
  if (power_grid_db.empty()) throw DomainError("power grid must not be empty");
  for (std::size_t i = 1; i < power_grid_db.size(); ++i) {
    if (!(power_grid_db[i] > power_grid_db[i - 1])) {
      throw DomainError("power grid must be strictly increasing");
    }
  }
  if (thresholds.empty()) throw DomainError("at least one threshold is required");
  for (double t : thresholds) {
    if (!(t >= 0.0) || std::isinf(t)) throw DomainError("thresholds must be finite and >= 0");
  }
  if (eve_mode == EveMode::UniformRandom && analytic_eve_points == 0) {
    throw DomainError("uniform eve mode needs at least one analytic eve position");
  }
}

std::vector<double> power_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw DomainError("power step must be positive");
  if (!(stop >= start)) throw DomainError("power grid stop must not precede start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = start + static_cast<double>(i) * step;
  return grid;
}

std::vector<double> h0_quantile_thresholds(const Scenario& scenario,
                                           std::span<const double> quantile_levels,
                                           double at_power_db) {
  const QuadFormDist h0 = h0_distribution(scenario.with_power(at_power_db));
  std::vector<double> out;
  out.reserve(quantile_levels.size());
  for (double q : quantile_levels) out.push_back(h0.quantile(q));
  return out;
}

std::vector<Point> quasi_random_points(const Region& region, std::size_t count) {
  std::vector<Point> out;
  out.reserve(count);
  // Index 0 would map onto the region corner.
  for (std::size_t i = 1; i <= count; ++i) {
    out.push_back({region.width_m * (radical_inverse(i, 2) - 0.5),
                   region.height_m * (radical_inverse(i, 3) - 0.5)});
  }
  return out;
}

double p_md_analytic_averaged(const Scenario& scenario, const DecisionConfig& config,
                              std::span<const Point> eve_positions) {
  if (eve_positions.empty()) throw DomainError("no eve positions to average over");
  double sum = 0.0;
  for (const Point& eve : eve_positions) sum += p_md_analytic(scenario.with_eve(eve), config);
  return sum / static_cast<double>(eve_positions.size());
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<Point> eve_positions =
      spec.eve_mode == EveMode::UniformRandom
          ? quasi_random_points(spec.scenario.region, spec.analytic_eve_points)
          : std::vector<Point>{};

  const std::size_t n_thresholds = spec.thresholds.size();
  std::vector<SweepRow> rows(spec.power_grid_db.size() * n_thresholds);
  auto work = [&](std::size_t index) {
    rows[index] = evaluate_row(spec, spec.power_grid_db[index / n_thresholds],
                               spec.thresholds[index % n_thresholds], eve_positions);
  };

  unsigned workers = spec.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : spec.workers;
  if (workers <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) work(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < rows.size(); i = next++) work(i);
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

std::vector<RocPoint> roc_curve(const Scenario& scenario, double power_db, std::size_t n_points) {
  if (n_points < 2) throw DomainError("an ROC curve needs at least 2 points");
  const Scenario at_power = scenario.with_power(power_db);
  const QuadFormDist h0 = h0_distribution(at_power);
  const QuadFormDist h1 = h1_distribution(at_power);
  std::vector<RocPoint> curve;
  curve.reserve(n_points);
  // Level 1 is an infinite threshold, level 0 a zero threshold.
  for (std::size_t k = n_points; k-- > 0;) {
    const double level = static_cast<double>(k) / static_cast<double>(n_points - 1);
    if (k == n_points - 1) {
      curve.push_back({0.0, 0.0});
      continue;
    }
    const double threshold = k == 0 ? 0.0 : h0.quantile(level);
    RocPoint point{1.0 - h0.cdf(threshold), 1.0 - h1.cdf(threshold)};
    // Keep p_d monotone despite quadrature noise below the accuracy contract.
    point.p_d = std::max(point.p_d, curve.back().p_d);
    curve.push_back(point);
  }
  return curve;
}

}  // namespace uwauth
