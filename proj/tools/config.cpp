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

#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "uwauth/error.hpp"

namespace uwauth::cli {

namespace {

using nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    throw ConfigError(source_ + ": field '" + field + "': " + message);
  }

  const json& require(const json& object, const std::string& path, const char* key) const {
    const auto it = object.find(key);
    if (it == object.end()) fail(join(path, key), "missing required key");
    return *it;
  }

  void reject_unknown(const json& object, const std::string& path,
                      std::initializer_list<const char*> allowed) const {
    if (!object.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& item : object.items()) {
      const bool known = std::any_of(allowed.begin(), allowed.end(),
                                     [&](const char* k) { return item.key() == k; });
      if (!known) fail(join(path, item.key().c_str()), "unknown key");
    }
  }

  double number(const json& value, const std::string& field) const {
    if (!value.is_number()) fail(field, "expected a number");
    const double v = value.get<double>();
    if (!std::isfinite(v)) fail(field, "must be finite");
    return v;
  }

  double positive(const json& value, const std::string& field) const {
    const double v = number(value, field);
    if (!(v > 0.0)) fail(field, "must be positive");
    return v;
  }

  Point point(const json& value, const std::string& field) const {
    if (!value.is_array() || value.size() != 2) fail(field, "expected [x, y]");
    return {number(value[0], field + "[0]"), number(value[1], field + "[1]")};
  }

  std::vector<double> numbers(const json& value, const std::string& field) const {
    if (!value.is_array()) fail(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
      out.push_back(number(value[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  std::uint64_t count(const json& value, const std::string& field) const {
    if (!value.is_number_integer() || (value.is_number_integer() && !value.is_number_unsigned() &&
                                       value.get<std::int64_t>() < 0)) {
      fail(field, "expected a non-negative integer");
    }
    return value.get<std::uint64_t>();
  }

  static std::string join(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
  }

 private:
  std::string source_;
};

std::size_t line_of(const std::string& text, std::size_t byte) {
  const auto end = text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size()));
  return 1 + static_cast<std::size_t>(std::count(text.begin(), end, '\n'));
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& source_name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw ConfigError(source_name + ":" + std::to_string(line_of(text, byte)) +
                      ": invalid JSON: " + e.what());
  }

  const Reader r(source_name);
  r.reject_unknown(doc, "",
                   {"region", "anchors", "alice", "eve", "channel", "sweep", "trials", "seed"});

  const json& region = r.require(doc, "", "region");
  r.reject_unknown(region, "region", {"width_m", "height_m"});
  const Region reg{r.positive(r.require(region, "region", "width_m"), "region.width_m"),
                   r.positive(r.require(region, "region", "height_m"), "region.height_m")};

  const json& anchors_json = r.require(doc, "", "anchors");
  if (!anchors_json.is_array()) r.fail("anchors", "expected a list of [x, y]");
  std::vector<Point> anchor_points;
  for (std::size_t i = 0; i < anchors_json.size(); ++i) {
    anchor_points.push_back(r.point(anchors_json[i], "anchors[" + std::to_string(i) + "]"));
  }

  const Point alice = r.point(r.require(doc, "", "alice"), "alice");

  EveMode eve_mode = EveMode::Fixed;
  const json& eve = r.require(doc, "", "eve");
  Point eve_point = alice;
  if (eve.is_string()) {
    if (eve.get<std::string>() != "uniform") r.fail("eve", "expected [x, y] or \"uniform\"");
    eve_mode = EveMode::UniformRandom;
  } else {
    eve_point = r.point(eve, "eve");
  }

  const json& channel = r.require(doc, "", "channel");
  r.reject_unknown(channel, "channel",
                   {"frequency_khz", "sound_speed_mps", "spreading_factor", "signal_design_gain"});
  ChannelParams params;
  params.frequency_khz =
      r.positive(r.require(channel, "channel", "frequency_khz"), "channel.frequency_khz");
  params.sound_speed_mps =
      r.positive(r.require(channel, "channel", "sound_speed_mps"), "channel.sound_speed_mps");
  params.spreading_factor =
      r.positive(r.require(channel, "channel", "spreading_factor"), "channel.spreading_factor");
  if (channel.contains("signal_design_gain")) {
    params.signal_design_gain =
        r.positive(channel["signal_design_gain"], "channel.signal_design_gain");
  }

  const json& sweep = r.require(doc, "", "sweep");
  r.reject_unknown(sweep, "sweep", {"power_db", "thresholds"});
  const auto power = r.numbers(r.require(sweep, "sweep", "power_db"), "sweep.power_db");
  if (power.size() != 3) r.fail("sweep.power_db", "expected [start, stop, step]");
  if (!(power[2] > 0.0)) r.fail("sweep.power_db", "step must be positive");
  if (!(power[1] >= power[0])) r.fail("sweep.power_db", "stop must not precede start");
  params.transmit_power_db = power[0];

  ThresholdSpec thresholds_out;
  const json& thresholds = r.require(sweep, "sweep", "thresholds");
  if (thresholds.is_array()) {
    thresholds_out.values = r.numbers(thresholds, "sweep.thresholds");
    if (thresholds_out.values.empty()) r.fail("sweep.thresholds", "must not be empty");
    for (double t : thresholds_out.values) {
      if (t < 0.0) r.fail("sweep.thresholds", "thresholds must be >= 0");
    }
  } else {
    r.reject_unknown(thresholds, "sweep.thresholds", {"h0_quantiles", "at_power_db"});
    thresholds_out.quantile_levels =
        r.numbers(r.require(thresholds, "sweep.thresholds", "h0_quantiles"),
                  "sweep.thresholds.h0_quantiles");
    if (thresholds_out.quantile_levels.empty()) {
      r.fail("sweep.thresholds.h0_quantiles", "must not be empty");
    }
    for (double q : thresholds_out.quantile_levels) {
      if (!(q > 0.0 && q < 1.0)) r.fail("sweep.thresholds.h0_quantiles", "levels must lie in (0, 1)");
    }
    thresholds_out.at_power_db = r.number(r.require(thresholds, "sweep.thresholds", "at_power_db"),
                                          "sweep.thresholds.at_power_db");
  }

  const std::uint64_t trials = r.count(r.require(doc, "", "trials"), "trials");
  const std::uint64_t seed = r.count(r.require(doc, "", "seed"), "seed");

  std::optional<AnchorArray> anchors;
  try {
    anchors.emplace(std::move(anchor_points));
  } catch (const std::exception& e) {
    r.fail("anchors", e.what());
  }
  ScenarioConfig cfg{Scenario{*anchors, alice, eve_point, params, reg},
                     eve_mode,
                     power[0],
                     power[1],
                     power[2],
                     std::move(thresholds_out),
                     trials,
                     seed};
  try {
    cfg.scenario.validate();
  } catch (const std::exception& e) {
    r.fail(eve_mode == EveMode::Fixed ? "alice/eve" : "alice", e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

}  // namespace uwauth::cli
