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

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"

using namespace uwauth;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config_path(const std::string& name) { return std::string(UWAUTH_CONFIG_DIR) + "/" + name; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("uwauth_test_" + std::to_string(std::hash<std::string>{}(
                                  std::to_string(reinterpret_cast<std::uintptr_t>(this)) +
                                  std::to_string(std::rand()))));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string write(const TempDir& dir, const std::string& name, const std::string& text) {
  const auto p = dir / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

nlohmann::json reference_json() { return nlohmann::json::parse(read_file(config_path("reference.json"))); }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("pathloss") {
  auto r = run({"pathloss", "-f", "10", "-d", "500", "-v", "1.5"});
  CHECK(r.code == 0);
  CHECK(r.out == "alpha=1.18703 dB/km, PL=41.0781 dB\n");
  CHECK(r.err.empty());

  r = run({"pathloss", "-f", "10", "-d", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "alpha=1.18703 dB/km, PL=0.00118703 dB\n");

  r = run({"pathloss", "-f", "0", "-d", "500"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("frequency must be positive") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"pathloss", "-f", "abc", "-d", "1"}).code == 2);
  CHECK(run({"localize"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"localize", config_path("reference.json"), "--noise", "maybe"}).code == 2);
  CHECK(run({"localize", "/nonexistent/config.json"}).code == 2);
}

TEST_CASE("localize without noise") {
  const auto r = run({"localize", config_path("reference.json"), "--noise", "off"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(std::abs(doc["estimate"]["x"].get<double>()) <= 1e-9);
  CHECK(std::abs(doc["estimate"]["y"].get<double>()) <= 1e-9);
  CHECK(doc["consistency_gap"].get<double>() <= 1e-6);
  REQUIRE(doc["sigma_m"].size() == 3);
  CHECK(doc["sigma_m"][0].get<double>() == doctest::Approx(84.9).epsilon(1e-3));
  CHECK(doc["noise"] == false);

  const auto eve = run({"localize", config_path("fixed_eve.json"), "--noise", "off", "--node", "eve"});
  REQUIRE(eve.code == 0);
  const auto e = nlohmann::json::parse(eve.out);
  CHECK(e["estimate"]["x"].get<double>() == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(e["estimate"]["y"].get<double>() == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(run({"localize", config_path("reference.json"), "--node", "eve"}).code == 2);
}

TEST_CASE("localize with noise is reproducible") {
  const auto a = run({"localize", config_path("reference.json"), "--seed", "17"});
  const auto b = run({"localize", config_path("reference.json"), "--seed", "17"});
  const auto c = run({"localize", config_path("reference.json"), "--seed", "18"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  CHECK(nlohmann::json::parse(a.out)["seed"] == 17);
}

TEST_CASE("malformed configs") {
  TempDir dir;
  auto r = run({"localize", write(dir, "broken.json", "{\n  \"region\": {\n  \"width_m\": 1000,,\n}")});
  CHECK(r.code == 2);
  CHECK(r.err.find("broken.json:3") != std::string::npos);
  CHECK(r.out.empty());

  auto doc = reference_json();
  doc["colour"] = "blue";
  r = run({"localize", write(dir, "unknown.json", doc.dump())});
  CHECK(r.code == 2);
  CHECK(r.err.find("colour") != std::string::npos);

  doc = reference_json();
  doc["channel"]["spreading_factor"] = -1.5;
  r = run({"localize", write(dir, "spread.json", doc.dump())});
  CHECK(r.code == 2);
  CHECK(r.err.find("channel.spreading_factor") != std::string::npos);

  doc = reference_json();
  doc.erase("seed");
  r = run({"localize", write(dir, "noseed.json", doc.dump())});
  CHECK(r.code == 2);
  CHECK(r.err.find("seed") != std::string::npos);

  doc = reference_json();
  doc["anchors"] = {{0, 0}, {1, 1}, {2, 2}};
  r = run({"localize", write(dir, "collinear.json", doc.dump())});
  CHECK(r.code == 2);

  doc = reference_json();
  doc["alice"] = {900, 0};
  CHECK(run({"localize", write(dir, "outside.json", doc.dump())}).code == 2);

  doc = reference_json();
  doc["eve"] = "somewhere";
  CHECK(run({"localize", write(dir, "eve.json", doc.dump())}).code == 2);

  doc = reference_json();
  doc["sweep"]["power_db"] = {0, 100};
  CHECK(run({"localize", write(dir, "grid.json", doc.dump())}).code == 2);

  doc = reference_json();
  doc["trials"] = -5;
  CHECK(run({"localize", write(dir, "trials.json", doc.dump())}).code == 2);
}

TEST_CASE("config parsing") {
  const auto cfg = cli::load_config(config_path("reference.json"));
  CHECK(cfg.eve_mode == EveMode::UniformRandom);
  CHECK(cfg.scenario.anchors.size() == 3);
  CHECK(cfg.scenario.channel.frequency_khz == 10.0);
  CHECK(cfg.thresholds.from_quantiles());
  CHECK(cfg.thresholds.at_power_db == 50.0);
  CHECK(cfg.seed == 20240601u);

  auto doc = reference_json();
  doc["sweep"]["thresholds"] = {1e9, 1e10};
  doc["eve"] = {100, -100};
  const auto explicit_cfg = cli::parse_config(doc.dump(), "inline");
  CHECK_FALSE(explicit_cfg.thresholds.from_quantiles());
  CHECK(explicit_cfg.thresholds.values == std::vector<double>{1e9, 1e10});
  CHECK(explicit_cfg.scenario.eve == Point{100, -100});
  CHECK_THROWS_AS(cli::parse_config("[1, 2]", "inline"), cli::ConfigError);
}

TEST_CASE("sweep output") {
  TempDir dir;
  auto doc = reference_json();
  doc["trials"] = 0;
  const auto cfg = write(dir, "analytic.json", doc.dump());
  const auto csv = (dir / "analytic.csv").string();
  const auto r = run({"sweep", cfg, "--out", csv});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(r.err.find("63 rows") != std::string::npos);

  const auto rows = lines(read_file(csv));
  REQUIRE(rows.size() == 64);
  CHECK(rows[0] == "power_db,threshold,p_fa_analytic,p_md_analytic,p_fa_emp,p_md_emp,stderr_fa,stderr_md");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].size() > 4);
    CHECK(rows[i].substr(rows[i].size() - 4) == ",,,,");
  }

  const auto meta = nlohmann::json::parse(read_file(dir / "analytic.meta.json"));
  CHECK(meta["seed"] == 20240601);
  CHECK(meta["eve_mode"] == "uniform_random");
  CHECK(meta["thresholds"]["source"] == "h0_quantiles");
  CHECK(meta["thresholds"]["values"].size() == 3);
  CHECK(meta["rows"] == 63);
}

TEST_CASE("sweep reruns are byte-identical") {
  TempDir dir;
  auto doc = reference_json();
  doc["trials"] = 300;
  doc["sweep"]["power_db"] = {20, 80, 20};
  const auto cfg = write(dir, "small.json", doc.dump());
  const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  REQUIRE(run({"sweep", cfg, "--out", a, "--workers", "1"}).code == 0);
  REQUIRE(run({"sweep", cfg, "--out", b, "--workers", "4"}).code == 0);
  const auto text = read_file(a);
  CHECK(text == read_file(b));
  CHECK(lines(text).size() == 13);
  CHECK(lines(text)[1].find(",,") == std::string::npos);
}

TEST_CASE("roc output") {
  auto r = run({"roc", config_path("fixed_eve.json"), "--points", "2"});
  REQUIRE(r.code == 0);
  auto rows = lines(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "p_fa,p_d");
  CHECK(rows[1] == "0,0");
  CHECK(rows[2] == "1,1");

  r = run({"roc", config_path("fixed_eve.json"), "--points", "101", "--power", "60"});
  REQUIRE(r.code == 0);
  rows = lines(r.out);
  REQUIRE(rows.size() == 102);
  const auto cfg = cli::load_config(config_path("fixed_eve.json"));
  const auto curve = roc_curve(cfg.scenario, 60.0, 101);
  double prev = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    double fa, pd;
    REQUIRE(std::sscanf(rows[i + 1].c_str(), "%lf,%lf", &fa, &pd) == 2);
    CHECK(fa == curve[i].p_fa);
    CHECK(pd == curve[i].p_d);
    CHECK(pd >= prev);
    prev = pd;
  }

  TempDir dir;
  auto doc = reference_json();
  doc["eve"] = doc["alice"];
  doc["alice"] = {0, 0};
  r = run({"roc", write(dir, "same.json", doc.dump()), "--points", "21"});
  REQUIRE(r.code == 0);
  rows = lines(r.out);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double fa, pd;
    REQUIRE(std::sscanf(rows[i].c_str(), "%lf,%lf", &fa, &pd) == 2);
    CHECK(std::abs(fa - pd) <= 1e-6);
  }

  const auto out = (dir / "roc.csv").string();
  CHECK(run({"roc", config_path("fixed_eve.json"), "--points", "5", "--out", out}).code == 0);
  CHECK(lines(read_file(out)).size() == 6);
  CHECK(run({"roc", config_path("reference.json")}).code == 2);
  CHECK(run({"roc", config_path("fixed_eve.json"), "--points", "1"}).code == 2);
}

}
