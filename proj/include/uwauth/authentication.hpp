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

#include <cstdint>

#include <Eigen/Dense>

#include "uwauth/localization.hpp"
#include "uwauth/quadform.hpp"

namespace uwauth {

enum class Hypothesis {
  H0NoImpersonation,
  H1Impersonation,
};

struct DecisionConfig {
  /// Threshold on the residual energy, in m^4.
  double threshold = 0.0;
};

enum class RateMethod { Analytic, Empirical };

struct ErrorRates {
  double p_fa = 0.0;
  double p_md = 0.0;
  RateMethod method = RateMethod::Analytic;
  double stderr_fa = 0.0;
  double stderr_md = 0.0;
  std::uint64_t trials = 0;
};

/// Residual of the observed squared ranges against a claimed position,
/// r = b - A (x, y, x^2 + y^2). Entry i equals 2 d_i n_i + d_i^2 - c_i^2,
/// with d_i the true and c_i the claimed anchor distance.
Eigen::VectorXd residual_vector(const NoisySquaredDistances& observed, const AnchorArray& anchors,
                                const Point& claimed);

/// Squared norm of the residual.
double test_statistic(const Eigen::VectorXd& residual);

/// The statistic through the truncated pseudoinverse chain:
/// || pinv(A2) (X_hat - X_claimed) ||^2, with A2 the first two rows of
/// pinv(A). This is the squared norm of the residual projected onto the row
/// space of A2, so it never exceeds test_statistic.
double test_statistic_pinv(const NoisySquaredDistances& observed, const AnchorArray& anchors,
                           const Point& claimed);

/// H1 iff ts > threshold.
Hypothesis decide(double ts, const DecisionConfig& config);

/// Law of the statistic when Alice transmits.
QuadFormDist h0_distribution(const Scenario& scenario);

/// Law of the statistic when Eve transmits while claiming Alice's position.
QuadFormDist h1_distribution(const Scenario& scenario);

double p_fa_analytic(const Scenario& scenario, const DecisionConfig& config);
double p_md_analytic(const Scenario& scenario, const DecisionConfig& config);

enum class EveMode {
  Fixed,
  /// Eve is redrawn uniformly over the deployment region for every trial.
  UniformRandom,
};

struct EmpiricalOptions {
  EveMode eve_mode = EveMode::Fixed;
  SamplingOptions sampling;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 1;
};

/// Monte Carlo rates from `trials` packets per hypothesis pushed through
/// sampling, residual, statistic and decision. Trial k under hypothesis h
/// uses Rng::for_trial(master_seed, h, k), so the result does not depend on
/// the number of workers.
ErrorRates empirical_rates(const Scenario& scenario, const DecisionConfig& config,
                           std::uint64_t trials, std::uint64_t master_seed,
                           const EmpiricalOptions& options = {});

/// Threshold whose analytic false-alarm rate equals `target_pfa`.
DecisionConfig calibrate_threshold(const Scenario& scenario, double target_pfa);

}  // namespace uwauth
