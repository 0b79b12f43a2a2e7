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

#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "uwauth/error.hpp"

namespace uwauth::cli {

namespace {

std::string format_number(const char* spec, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, value);
  return buf;
}

std::string exact(double v) { return format_number("%.17g", v); }

void ensure_parent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

std::string optional_field(const std::optional<double>& v) { return v ? exact(*v) : ""; }

int cmd_pathloss(double frequency_khz, double distance_m, double spreading, std::ostream& out) {
  if (!(frequency_khz > 0.0)) throw DomainError("frequency must be positive");
  if (!(distance_m > 0.0)) throw DomainError("distance must be positive");
  if (!(spreading > 0.0)) throw DomainError("spreading factor must be positive");
  ChannelParams params;
  params.frequency_khz = frequency_khz;
  params.spreading_factor = spreading;
  out << "alpha=" << format_number("%.6g", absorption_db_per_km(frequency_khz))
      << " dB/km, PL=" << format_number("%.6g", pathloss_db(distance_m, params)) << " dB\n";
  return kExitOk;
}

struct LocalizeArgs {
  std::string config;
  std::string noise = "on";
  std::optional<std::uint64_t> seed;
  double power_db = 60.0;
  std::string node = "alice";
};

int cmd_localize(const LocalizeArgs& args, std::ostream& out) {
  const ScenarioConfig cfg = load_config(args.config);
  if (args.node == "eve" && cfg.eve_mode != EveMode::Fixed) {
    throw ConfigError(args.config + ": field 'eve': localizing eve needs a fixed position");
  }
  const Scenario scenario = cfg.scenario.with_power(args.power_db);
  scenario.channel.validate();
  const Point node = args.node == "alice" ? scenario.alice : scenario.eve;
  const std::uint64_t seed = args.seed.value_or(cfg.seed);

  SamplingOptions sampling;
  sampling.noiseless = args.noise == "off";
  Rng rng(seed);
  const auto observed =
      sample_noisy_squared_distances(node, scenario.anchors, scenario.channel, rng, sampling);
  const LinearSystem sys = build_system(scenario.anchors, observed);
  const Eigen::Vector3d lifted = solve_position(sys.A, sys.b);

  nlohmann::ordered_json doc;
  doc["node"] = args.node;
  doc["power_db"] = args.power_db;
  doc["noise"] = !sampling.noiseless;
  doc["seed"] = seed;
  doc["true_position"] = {{"x", node.x}, {"y", node.y}};
  doc["estimate"] = {{"x", lifted(0)}, {"y", lifted(1)}};
  doc["lifted_norm_sq"] = lifted(2);
  doc["consistency_gap"] = consistency_gap(lifted);
  doc["sigma_m"] = noise_std_per_anchor(node, scenario.anchors, scenario.channel);
  out << doc.dump(2) << "\n";
  return kExitOk;
}

struct SweepArgs {
  std::string config;
  std::string out_path;
  unsigned workers = 0;
};

int cmd_sweep(const SweepArgs& args, std::ostream& err) {
  const ScenarioConfig cfg = load_config(args.config);

  SweepSpec spec{cfg.scenario,
                 power_grid(cfg.power_start_db, cfg.power_stop_db, cfg.power_step_db),
                 {},
                 cfg.trials,
                 cfg.seed,
                 cfg.eve_mode};
  spec.workers = args.workers;
  nlohmann::ordered_json thresholds_meta;
  if (cfg.thresholds.from_quantiles()) {
    spec.thresholds = h0_quantile_thresholds(cfg.scenario, cfg.thresholds.quantile_levels,
                                             cfg.thresholds.at_power_db);
    thresholds_meta["source"] = "h0_quantiles";
    thresholds_meta["levels"] = cfg.thresholds.quantile_levels;
    thresholds_meta["at_power_db"] = cfg.thresholds.at_power_db;
  } else {
    spec.thresholds = cfg.thresholds.values;
    thresholds_meta["source"] = "explicit";
  }
  thresholds_meta["values"] = spec.thresholds;

  const std::vector<SweepRow> rows = run_sweep(spec);

  ensure_parent(args.out_path);
  std::ofstream csv(args.out_path, std::ios::binary);
  if (!csv) throw ConfigError(args.out_path + ": cannot open output file");
  write_sweep_csv(csv, rows);

  nlohmann::ordered_json meta;
  meta["config"] = args.config;
  meta["seed"] = cfg.seed;
  meta["trials_per_point"] = cfg.trials;
  meta["eve_mode"] = cfg.eve_mode == EveMode::Fixed ? "fixed" : "uniform_random";
  if (cfg.eve_mode == EveMode::UniformRandom) {
    meta["analytic_eve_points"] = spec.analytic_eve_points;
    meta["analytic_eve_sequence"] = "halton(2,3)";
  }
  meta["power_db"] = spec.power_grid_db;
  meta["thresholds"] = thresholds_meta;
  meta["rows"] = rows.size();
  const std::filesystem::path sidecar =
      std::filesystem::path(args.out_path).replace_extension(".meta.json");
  std::ofstream(sidecar, std::ios::binary) << meta.dump(2) << "\n";

  std::size_t failed = 0;
  for (const auto& row : rows) {
    if (row.error) {
      ++failed;
      err << "row power_db=" << exact(row.power_db) << " threshold=" << exact(row.threshold)
          << " failed: " << *row.error << "\n";
    }
  }
  err << "sweep: " << rows.size() << " rows (" << spec.power_grid_db.size() << " powers x "
      << spec.thresholds.size() << " thresholds), trials=" << cfg.trials
      << ", eve_mode=" << meta["eve_mode"].get<std::string>() << ", wrote " << args.out_path
      << " and " << sidecar.string() << "\n";
  return failed == 0 ? kExitOk : kExitNumerical;
}

struct RocArgs {
  std::string config;
  double power_db = 60.0;
  std::size_t points = 101;
  std::string out_path;
};

int cmd_roc(const RocArgs& args, std::ostream& out) {
  const ScenarioConfig cfg = load_config(args.config);
  if (cfg.eve_mode != EveMode::Fixed) {
    throw ConfigError(args.config + ": field 'eve': roc needs a fixed eve position");
  }
  if (args.points < 2) throw DomainError("--points must be at least 2");
  const auto curve = roc_curve(cfg.scenario, args.power_db, args.points);
  if (args.out_path.empty()) {
    write_roc_csv(out, curve);
  } else {
    ensure_parent(args.out_path);
    std::ofstream file(args.out_path, std::ios::binary);
    if (!file) throw ConfigError(args.out_path + ": cannot open output file");
    write_roc_csv(file, curve);
  }
  return kExitOk;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "power_db,threshold,p_fa_analytic,p_md_analytic,p_fa_emp,p_md_emp,stderr_fa,stderr_md\n";
  for (const auto& r : rows) {
    out << exact(r.power_db) << ',' << exact(r.threshold) << ',' << optional_field(r.p_fa_analytic)
        << ',' << optional_field(r.p_md_analytic) << ',' << optional_field(r.p_fa_empirical) << ','
        << optional_field(r.p_md_empirical) << ',' << optional_field(r.stderr_fa) << ','
        << optional_field(r.stderr_md) << '\n';
  }
}

void write_roc_csv(std::ostream& out, const std::vector<RocPoint>& curve) {
  out << "p_fa,p_d\n";
  for (const auto& p : curve) out << exact(p.p_fa) << ',' << exact(p.p_d) << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Position-based physical-layer authentication for underwater acoustic networks",
               "uwauth"};
  app.require_subcommand(1);
  std::function<int()> action;

  double frequency = 10.0, distance = 1.0, spreading = 1.5;
  auto* pathloss = app.add_subcommand("pathloss", "Absorption and pathloss of one link");
  pathloss->add_option("-f,--frequency", frequency, "Frequency in kHz")->required();
  pathloss->add_option("-d,--distance", distance, "Distance in m")->required();
  pathloss->add_option("-v,--spreading", spreading, "Spreading factor")->capture_default_str();
  pathloss->callback([&] { action = [&] { return cmd_pathloss(frequency, distance, spreading, out); }; });

  LocalizeArgs loc;
  auto* localize = app.add_subcommand("localize", "Least-squares position fix as JSON");
  localize->add_option("config", loc.config, "Scenario JSON")->required();
  localize->add_option("--noise", loc.noise, "Range noise")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  localize->add_option("--seed", loc.seed, "Overrides the config seed");
  localize->add_option("--power", loc.power_db, "Transmit power in dB re 1 Pa")
      ->capture_default_str();
  localize->add_option("--node", loc.node, "Transmitter to localize")
      ->check(CLI::IsMember({"alice", "eve"}))
      ->capture_default_str();
  localize->callback([&] { action = [&] { return cmd_localize(loc, out); }; });

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Error probabilities over the power grid as CSV");
  sweep->add_option("config", sw.config, "Scenario JSON")->required();
  sweep->add_option("--out", sw.out_path, "CSV output path")->required();
  sweep->add_option("--workers", sw.workers, "Parallel grid workers (0 = all cores)")
      ->capture_default_str();
  sweep->callback([&] { action = [&] { return cmd_sweep(sw, err); }; });

  RocArgs roc;
  auto* roc_cmd = app.add_subcommand("roc", "Analytic ROC curve as CSV");
  roc_cmd->add_option("config", roc.config, "Scenario JSON (fixed eve)")->required();
  roc_cmd->add_option("--power", roc.power_db, "Transmit power in dB re 1 Pa")
      ->capture_default_str();
  roc_cmd->add_option("--points", roc.points, "Number of operating points")->capture_default_str();
  roc_cmd->add_option("--out", roc.out_path, "CSV output path (default stdout)");
  roc_cmd->callback([&] { action = [&] { return cmd_roc(roc, out); }; });

  std::vector<const char*> argv{"uwauth"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const NumericalAccuracyError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace uwauth::cli
