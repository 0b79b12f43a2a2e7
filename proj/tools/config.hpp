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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwauth/authentication.hpp"
#include "uwauth/localization.hpp"

namespace uwauth::cli {

/// Malformed or invalid scenario configuration; exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ThresholdSpec {
  /// Explicit thresholds (m^4); used when quantile_levels is empty.
  std::vector<double> values;
  std::vector<double> quantile_levels;
  double at_power_db = 50.0;

  bool from_quantiles() const { return !quantile_levels.empty(); }
};

struct ScenarioConfig {
  Scenario scenario;
  EveMode eve_mode = EveMode::Fixed;
  double power_start_db = 0.0;
  double power_stop_db = 100.0;
  double power_step_db = 5.0;
  ThresholdSpec thresholds;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Parses and validates a JSON scenario document. Unknown keys are rejected
/// and every geometric invariant is re-checked. Errors name the line (for
/// syntax errors) or the offending field.
ScenarioConfig parse_config(const std::string& text, const std::string& source_name);

ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace uwauth::cli
