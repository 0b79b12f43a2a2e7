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

#include "uwauth/authentication.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>
#include <vector>

#include "uwauth/error.hpp"

namespace uwauth {

Eigen::VectorXd residual_vector(const NoisySquaredDistances& observed, const AnchorArray& anchors,
                                const Point& claimed) {
  const LinearSystem sys = build_system(anchors, observed);
  return sys.b - sys.A * lift(claimed);
}

double test_statistic(const Eigen::VectorXd& residual) { return residual.squaredNorm(); }

double test_statistic_pinv(const NoisySquaredDistances& observed, const AnchorArray& anchors,
                           const Point& claimed) {
  const LinearSystem sys = build_system(anchors, observed);
  const Eigen::Vector3d lifted = solve_position(sys.A, sys.b);
  const Eigen::MatrixXd a_pinv = sys.A.completeOrthogonalDecomposition().pseudoInverse();
  const Eigen::MatrixXd planar_rows = a_pinv.topRows(2);
  const Eigen::MatrixXd back = planar_rows.completeOrthogonalDecomposition().pseudoInverse();
  const Eigen::Vector2d offset(lifted(0) - claimed.x, lifted(1) - claimed.y);
  return (back * offset).squaredNorm();
}

Hypothesis decide(double ts, const DecisionConfig& config) {
  return ts > config.threshold ? Hypothesis::H1Impersonation : Hypothesis::H0NoImpersonation;
}

QuadFormDist h0_distribution(const Scenario& scenario) {
  const auto sigma = noise_std_per_anchor(scenario.alice, scenario.anchors, scenario.channel);
  std::vector<QuadTerm> terms;
  terms.reserve(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double d = true_distance(scenario.alice, scenario.anchors[i]);
    terms.push_back({2.0 * d * sigma[i], 0.0});
  }
  return QuadFormDist(std::move(terms));
}

QuadFormDist h1_distribution(const Scenario& scenario) {
  // Pathloss, and therefore sigma, follows the physical link from Eve.
  const auto sigma = noise_std_per_anchor(scenario.eve, scenario.anchors, scenario.channel);
  std::vector<QuadTerm> terms;
  terms.reserve(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double d_eve = true_distance(scenario.eve, scenario.anchors[i]);
    const double d_alice = true_distance(scenario.alice, scenario.anchors[i]);
    terms.push_back({2.0 * d_eve * sigma[i], d_eve * d_eve - d_alice * d_alice});
  }
  return QuadFormDist(std::move(terms));
}

namespace {

void check_threshold(const DecisionConfig& config) {
  if (!(config.threshold >= 0.0)) throw DomainError("threshold must be non-negative");
}

}  // namespace

double p_fa_analytic(const Scenario& scenario, const DecisionConfig& config) {
  check_threshold(config);
  return 1.0 - h0_distribution(scenario).cdf(config.threshold);
}

double p_md_analytic(const Scenario& scenario, const DecisionConfig& config) {
  check_threshold(config);
  return h1_distribution(scenario).cdf(config.threshold);
}

namespace {

struct Counts {
  std::uint64_t false_alarms = 0;
  std::uint64_t misses = 0;
};

Point uniform_point(const Region& region, Rng& rng) {
  return {rng.uniform(-0.5 * region.width_m, 0.5 * region.width_m),
          rng.uniform(-0.5 * region.height_m, 0.5 * region.height_m)};
}

Counts run_trials(const Scenario& scenario, const DecisionConfig& config, std::uint64_t begin,
                  std::uint64_t end, std::uint64_t seed, const EmpiricalOptions& options) {
  Counts c;
  for (std::uint64_t k = begin; k < end; ++k) {
    Rng h0 = Rng::for_trial(seed, 0, k);
    const auto obs0 = sample_noisy_squared_distances(scenario.alice, scenario.anchors,
                                                     scenario.channel, h0, options.sampling);
    const double ts0 = test_statistic(residual_vector(obs0, scenario.anchors, scenario.alice));
    if (decide(ts0, config) == Hypothesis::H1Impersonation) ++c.false_alarms;

    Rng h1 = Rng::for_trial(seed, 1, k);
    const Point eve = options.eve_mode == EveMode::UniformRandom
                          ? uniform_point(scenario.region, h1)
                          : scenario.eve;
    const auto obs1 = sample_noisy_squared_distances(eve, scenario.anchors, scenario.channel, h1,
                                                     options.sampling);
    const double ts1 = test_statistic(residual_vector(obs1, scenario.anchors, scenario.alice));
    if (decide(ts1, config) == Hypothesis::H0NoImpersonation) ++c.misses;
  }
  return c;
}

}  // namespace

ErrorRates empirical_rates(const Scenario& scenario, const DecisionConfig& config,
                           std::uint64_t trials, std::uint64_t master_seed,
                           const EmpiricalOptions& options) {
  if (trials == 0) throw DomainError("empirical_rates needs at least one trial");
  check_threshold(config);
  unsigned workers = options.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.workers;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, trials));

  std::vector<Counts> partial(workers);
  if (workers == 1) {
    partial[0] = run_trials(scenario, config, 0, trials, master_seed, options);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = trials * w / workers;
      const std::uint64_t end = trials * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        try {
          partial[w] = run_trials(scenario, config, begin, end, master_seed, options);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }

  Counts total;
  for (const auto& c : partial) {
    total.false_alarms += c.false_alarms;
    total.misses += c.misses;
  }
  const double n = static_cast<double>(trials);
  ErrorRates rates;
  rates.method = RateMethod::Empirical;
  rates.trials = trials;
  rates.p_fa = static_cast<double>(total.false_alarms) / n;
  rates.p_md = static_cast<double>(total.misses) / n;
  rates.stderr_fa = std::sqrt(rates.p_fa * (1.0 - rates.p_fa) / n);
  rates.stderr_md = std::sqrt(rates.p_md * (1.0 - rates.p_md) / n);
  return rates;
}

DecisionConfig calibrate_threshold(const Scenario& scenario, double target_pfa) {
  if (!(target_pfa > 0.0 && target_pfa < 1.0)) {
    throw DomainError("target false-alarm probability must lie in (0, 1)");
  }
  return {h0_distribution(scenario).quantile(1.0 - target_pfa)};
}

}  // namespace uwauth
