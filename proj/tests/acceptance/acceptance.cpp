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

// One line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "oracles.hpp"
#include "uwauth/authentication.hpp"
#include "uwauth/experiment.hpp"

using namespace uwauth;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* spec, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, spec, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Point uniform_point(const Region& region, Rng& rng) {
  return {rng.uniform(-0.5 * region.width_m, 0.5 * region.width_m),
          rng.uniform(-0.5 * region.height_m, 0.5 * region.height_m)};
}

Outcome exact_localization() {
  const Scenario s = reference_scenario();
  Rng rng(1001);
  std::vector<Point> nodes;
  while (nodes.size() < 1000) {
    const Point p = uniform_point(s.region, rng);
    bool clear = true;
    for (const auto& a : s.anchors) clear = clear && !(p == a);
    if (clear) nodes.push_back(p);
  }
  const std::vector<double> zero(3, 0.0);
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& p : nodes) {
    const auto obs = observe_squared_distances(p, s.anchors, zero, zero);
    const auto sys = build_system(s.anchors, obs);
    const Point est = planar(solve_position(sys.A, sys.b));
    worst = std::max(worst, std::hypot(est.x - p.x, est.y - p.y));
  }
  const double elapsed = seconds_since(t0);
  return {worst <= 1e-9 && elapsed < 1.0,
          fmt("max error %.3g m over 1000 positions (limit 1e-9), %.3f s (limit 1 s)", worst, elapsed)};
}

Outcome residual_identity() {
  const Scenario s = reference_scenario();
  Rng rng(2002);
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const Scenario at = s.with_power(rng.uniform(0.0, 100.0));
    const Point node = uniform_point(at.region, rng);
    const Point claimed = t % 2 ? at.alice : uniform_point(at.region, rng);
    const auto sigma = noise_std_per_anchor(node, at.anchors, at.channel);
    std::vector<double> noise;
    for (double sd : sigma) noise.push_back(sd * rng.normal());
    const auto obs = observe_squared_distances(node, at.anchors, sigma, noise);
    const auto r = residual_vector(obs, at.anchors, claimed);
    for (std::size_t i = 0; i < at.anchors.size(); ++i) {
      const auto& a = at.anchors[i];
      const double d = std::hypot(node.x - a.x, node.y - a.y);
      const double dc = std::hypot(claimed.x - a.x, claimed.y - a.y);
      const double expected = 2.0 * d * noise[i] + (d * d - dc * dc);
      worst = std::max(worst, std::abs(r(i) - expected) / std::abs(r(i)));
    }
  }
  return {worst <= 1e-9, fmt("max relative error %.3g over 10000 instances (limit 1e-9)", worst)};
}

Outcome quadform_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  const QuadFormDist one({{1.0, 0.0}});
  const QuadFormDist two({{1.0, 0.0}, {1.0, 0.0}});
  double closed = std::max(std::abs(one.cdf(1.0) - oracle::chi2_1_cdf(1.0)),
                           std::abs(two.cdf(2.0) - oracle::chi2_2_cdf(2.0)));
  for (int k = 1; k <= 400; ++k) {
    const double x = 0.05 * k;
    closed = std::max(closed, std::abs(one.cdf(x) - oracle::chi2_1_cdf(x)));
    closed = std::max(closed, std::abs(two.cdf(x) - oracle::chi2_2_cdf(x)));
  }

  Rng rng(3003);
  const int draws = 1000000;
  int mc_failures = 0;
  double worst_ratio = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const int n = 1 + static_cast<int>(rng.uniform() * 6);
    std::vector<QuadTerm> terms;
    for (int i = 0; i < n; ++i) {
      terms.push_back({rng.uniform(0.1, 10.0), inst % 2 ? rng.uniform(-10.0, 10.0) : 0.0});
    }
    const QuadFormDist q(terms);
    const double x = rng.uniform(0.1, 2.0) * q.mean();
    int hits = 0;
    for (int k = 0; k < draws; ++k) hits += q.sample(rng) <= x;
    const double p = q.cdf(x);
    const double limit = 3.0 * std::sqrt(p * (1.0 - p) / draws) + 1e-4;
    const double diff = std::abs(static_cast<double>(hits) / draws - p);
    worst_ratio = std::max(worst_ratio, diff / limit);
    if (diff > limit) ++mc_failures;
  }
  const double elapsed = seconds_since(t0);
  return {closed <= 1e-6 && mc_failures == 0 && elapsed < 60.0,
          fmt("chi-square(1,2) max error %.3g (limit 1e-6); Monte Carlo 1e6 draws: %d/100 outside "
              "3 SE + 1e-4 (worst at %.2f of limit); %.1f s (limit 60 s)",
              closed, mc_failures, worst_ratio, elapsed)};
}

Outcome analytic_empirical_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario base = reference_scenario();
  Rng rng(4004);
  const Point eve = uniform_point(base.region, rng);
  const std::uint64_t trials = 100000;
  EmpiricalOptions options;
  options.workers = 0;
  int failures = 0, checks = 0;
  double worst = 0.0;
  for (double power : {40.0, 60.0, 80.0}) {
    const Scenario s = base.with_power(power).with_eve(eve);
    for (double target : {0.5, 0.1, 0.01}) {
      const DecisionConfig cfg = calibrate_threshold(s, target);
      const double fa = p_fa_analytic(s, cfg), md = p_md_analytic(s, cfg);
      const ErrorRates emp = empirical_rates(s, cfg, trials, 4004 + checks, options);
      for (auto [p, e] : {std::pair{fa, emp.p_fa}, std::pair{md, emp.p_md}}) {
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
        const double diff = std::abs(p - e);
        if (diff > 3.0 * se) ++failures;
        if (se > 0.0) worst = std::max(worst, diff / se);
        ++checks;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  return {failures == 0 && elapsed < 120.0,
          fmt("eve (%.1f, %.1f), P in {40,60,80} dB, 3 thresholds, 1e5 trials: %d/%d outside 3 SE "
              "(worst %.2f SE); %.1f s (limit 120 s)",
              eve.x, eve.y, failures, checks, worst, elapsed)};
}

Outcome power_trends() {
  const Scenario s = reference_scenario();
  const std::vector<double> levels{0.5, 0.1, 0.01};
  const auto thresholds = h0_quantile_thresholds(s, levels, 50.0);
  const auto grid = power_grid(0.0, 100.0, 5.0);
  const auto eves = quasi_random_points(s.region, 1000);
  // Accuracy contract of the analytic engine.
  const double slack = 1e-6;

  std::vector<std::vector<double>> fa(thresholds.size()), md(thresholds.size());
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    for (double power : grid) {
      const Scenario at = s.with_power(power);
      fa[t].push_back(p_fa_analytic(at, {thresholds[t]}));
      md[t].push_back(p_md_analytic_averaged(at, {thresholds[t]}, eves));
    }
  }

  bool fa_monotone = true, md_monotone = true, cross = true;
  std::string md_detail;
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    bool strict = false;
    for (std::size_t k = 1; k < grid.size(); ++k) {
      if (fa[t][k] > fa[t][k - 1] + slack) fa_monotone = false;
      if (fa[t][k] < fa[t][k - 1] - slack) strict = true;
      if (md[t][k] > md[t][k - 1] + slack) md_monotone = false;
    }
    md_detail += fmt(" %.3g: %.3g at 0 dB, %.3g at 100 dB;", thresholds[t], md[t].front(),
                     md[t].back());
    fa_monotone = fa_monotone && strict;
  }
  // thresholds[0] > thresholds[1] > thresholds[2]
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (std::size_t t = 1; t < thresholds.size(); ++t) {
      if (fa[t - 1][k] > fa[t][k] + slack || md[t - 1][k] < md[t][k] - slack) cross = false;
    }
  }
  return {fa_monotone && md_monotone && cross,
          fmt("P_fa non-increasing and strictly decreasing: %s; P_md non-increasing in P: %s (by threshold:%s) "
              "larger threshold gives lower P_fa and higher P_md: %s",
              fa_monotone ? "yes" : "NO", md_monotone ? "yes" : "NO", md_detail.c_str(),
              cross ? "yes" : "NO")};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "uwauth_acceptance";
  fs::create_directories(dir);
  const std::string config = std::string(UWAUTH_CONFIG_DIR) + "/reference.json";
  std::ostringstream out, err;
  const int a = cli::run({"sweep", config, "--out", (dir / "a.csv").string(), "--workers", "1"}, out, err);
  const int b = cli::run({"sweep", config, "--out", (dir / "b.csv").string(), "--workers", "4"}, out, err);
  const std::string ca = read_file(dir / "a.csv"), cb = read_file(dir / "b.csv");
  const bool csv_same = a == 0 && b == 0 && !ca.empty() && ca == cb;
  fs::remove_all(dir);

  const Scenario s = reference_scenario(50.0);
  const DecisionConfig cfg = calibrate_threshold(s, 0.1);
  bool rates_same = true;
  for (EveMode mode : {EveMode::Fixed, EveMode::UniformRandom}) {
    EmpiricalOptions one, many;
    one.eve_mode = many.eve_mode = mode;
    many.workers = 8;
    const ErrorRates r1 = empirical_rates(s, cfg, 50000, 6006, one);
    const ErrorRates r8 = empirical_rates(s, cfg, 50000, 6006, many);
    rates_same = rates_same && r1.p_fa == r8.p_fa && r1.p_md == r8.p_md &&
                 r1.stderr_fa == r8.stderr_fa && r1.stderr_md == r8.stderr_md;
  }
  return {csv_same && rates_same,
          fmt("sweep CSV byte-identical across runs (%zu bytes): %s; rates identical for 1 vs 8 "
              "workers: %s",
              ca.size(), csv_same ? "yes" : "NO", rates_same ? "yes" : "NO")};
}

Outcome projection_comparison() {
  Rng rng(7007);
  auto anchors_of = [&](int n) {
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(-500, 500), rng.uniform(-500, 500)});
    return AnchorArray(pts);
  };
  int above = 0;
  for (int t = 0; t < 1000; ++t) {
    const AnchorArray anchors = anchors_of(5);
    const Point node{rng.uniform(-500, 500), rng.uniform(-500, 500)};
    const Point claimed = t % 2 ? node : Point{rng.uniform(-500, 500), rng.uniform(-500, 500)};
    std::vector<double> sigma(5), noise(5);
    for (int i = 0; i < 5; ++i) {
      sigma[i] = rng.uniform(0.1, 50.0);
      noise[i] = sigma[i] * rng.normal();
    }
    const auto obs = observe_squared_distances(node, anchors, sigma, noise);
    if (test_statistic_pinv(obs, anchors, claimed) > test_statistic(residual_vector(obs, anchors, claimed))) {
      ++above;
    }
  }

  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const AnchorArray anchors = anchors_of(3);
    const Eigen::MatrixXd A = design_matrix(anchors);
    const Eigen::MatrixXd rows = A.completeOrthogonalDecomposition().pseudoInverse().topRows(2);
    const Eigen::VectorXd r = rows.transpose() * Eigen::Vector2d(rng.normal(), rng.normal()) * 1e4;
    const Point claimed{rng.uniform(-500, 500), rng.uniform(-500, 500)};
    const Eigen::VectorXd b = r + A * lift(claimed);
    NoisySquaredDistances obs;
    for (int i = 0; i < 3; ++i) {
      obs.push_back({1.0, 0.0, b(i) + anchors[i].x * anchors[i].x + anchors[i].y * anchors[i].y});
    }
    const double ts = test_statistic(residual_vector(obs, anchors, claimed));
    worst = std::max(worst, std::abs(test_statistic_pinv(obs, anchors, claimed) - ts) / ts);
  }
  return {above == 0 && worst <= 1e-8,
          fmt("L=5: %d/1000 instances with projected > residual statistic; L=3 row-space "
              "residuals: max relative difference %.3g (limit 1e-8)",
              above, worst)};
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact localization", exact_localization},
      {"residual identity", residual_identity},
      {"quadratic form correctness", quadform_correctness},
      {"analytic/empirical agreement", analytic_empirical_agreement},
      {"power and threshold trends", power_trends},
      {"determinism", determinism},
      {"projection comparison", projection_comparison},
  };
  int failures = 0;
  int id = 0;
  for (const auto& [name, check] : criteria) {
    ++id;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("AC%d %s %s: %s\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
