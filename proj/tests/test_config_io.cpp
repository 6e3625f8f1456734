// Copyright 2026 The softtwin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "softtwin/config.hpp"
#include "softtwin/error.hpp"
#include "softtwin/trace_io.hpp"

using namespace softtwin;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

MultiTrace nominal_trace() {
  GripperSystem g = default_gripper();
  calibrate_gains(g, 1.0);
  GraspCommand cmd;
  cmd.hold_duration = 3.0;
  return simulate_grasp(g, cmd);
}

}  // namespace

TEST_CASE("config: empty text gives the defaults") {
  CHECK(parse_config("") == TwinConfig{});
  CHECK(parse_config("  \n\t") == TwinConfig{});
  CHECK(parse_config("{}") == TwinConfig{});
  const TwinConfig c;
  REQUIRE(c.fingers.size() == 2);
  CHECK(c.fingers[0].omega_n == 1.9);
  CHECK(c.fingers[1].omega_n == 1.75);
  CHECK(c.qlearn.alpha == 0.1);
  CHECK(c.qlearn.gamma == 0.95);
  CHECK(c.uncertainty == SpeedUncertaintyTable::defaults());
}

TEST_CASE("config: invalid field is named") {
  const std::string msg =
      message_of(R"({"fingers": [{"zeta_fwd": -1}, {}]})");
  CHECK(msg.find("fingers[0].zeta_fwd") != std::string::npos);
  CHECK(kind_of(R"({"fingers": [{"zeta_fwd": -1}]})") == ErrorKind::Configuration);
  CHECK(message_of(R"({"qlearn": {"gamma": 1.0}})").find("qlearn.gamma") != std::string::npos);
  CHECK(message_of(R"({"dt": 0})").find("dt") != std::string::npos);
  CHECK(message_of(R"({"pump": {"omega_max": -2}})").find("pump.omega_max") != std::string::npos);
}

TEST_CASE("config: unknown keys and wrong types are rejected") {
  CHECK(message_of(R"({"sed": 4})").find("sed") != std::string::npos);
  CHECK(kind_of(R"({"sed": 4})") == ErrorKind::Configuration);
  CHECK(message_of(R"({"fingers": [{"omega": 2}]})").find("omega") != std::string::npos);
  CHECK(kind_of(R"({"seed": "four"})") == ErrorKind::Configuration);
}

TEST_CASE("config: parse errors carry the location") {
  const std::string msg = message_of("{\n  \"seed\": 4,\n  oops\n}");
  CHECK(kind_of("{\n  \"seed\": 4,\n  oops\n}") == ErrorKind::Parse);
  CHECK(msg.rfind("cfg.json:3:", 0) == 0);
}

TEST_CASE("config: round trip") {
  TwinConfig c;
  c.seed = 1234567890123ULL;
  c.dt = 5e-4;
  c.fingers[1].omega_n = 1.6;
  c.fingers.push_back(c.fingers[0]);
  c.fingers[2].softening.lambda = 0.0;
  c.uncertainty.rows.pop_back();
  c.qlearn.bin_edges = {0.05, 0.1};
  c.qlearn.episodes = 3;
  c.settle.horizon = 60.0;
  c.threads = 3;
  const std::string text = serialize_config(c);
  const TwinConfig back = parse_config(text);
  CHECK(back == c);
  CHECK(serialize_config(back) == text);
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash(c) != config_hash(TwinConfig{}));
}

TEST_CASE("config: partial documents keep defaults") {
  const TwinConfig c = parse_config(R"({"seed": 9, "qlearn": {"episodes": 2}})");
  CHECK(c.seed == 9);
  CHECK(c.qlearn.episodes == 2);
  CHECK(c.qlearn.alpha == 0.1);
  CHECK(c.fingers == TwinConfig{}.fingers);
}

TEST_CASE("config: load from disk") {
  const auto dir = std::filesystem::temp_directory_path() / "softtwin_cfg_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "c.json";
  write_text(path, R"({"target_theta": 0.8})");
  CHECK(load_config(path).target_theta == 0.8);
  try {
    load_config(dir / "missing.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("config: derived objects") {
  TwinConfig c;
  c.qlearn.trials_per_step = 7;
  const EnvConfig env = make_env_config(c);
  CHECK(env.trials_per_step == 7);
  CHECK(env.gripper.size() == 2);
  CHECK(make_gripper(c).fingers == c.fingers);
  RunManifest m;
  m.scenario = "montecarlo";
  m.argv = {"softtwin", "montecarlo"};
  const std::string js = to_json(m);
  CHECK(js.find("\"scenario\": \"montecarlo\"") != std::string::npos);
  CHECK(utc_timestamp().size() == 20);
}

TEST_CASE("trace csv: header and columns") {
  const MultiTrace tr = nominal_trace();
  const std::string csv = format_trace_csv(tr);
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  CHECK(header == "t,p,theta_1,theta_2,theta_dot_1,theta_dot_2,event");
  std::getline(in, row);
  CHECK(std::count(row.begin(), row.end(), ',') == 6);
}

TEST_CASE("trace csv: round trip") {
  const MultiTrace tr = nominal_trace();
  const MultiTrace back = parse_trace_csv(format_trace_csv(tr));
  REQUIRE(back.rows() == tr.rows());
  REQUIRE(back.fingers() == tr.fingers());
  const double tol = 1e-8;
  CHECK((back.time - tr.time).cwiseAbs().maxCoeff() < tol);
  CHECK((back.pressure - tr.pressure).cwiseAbs().maxCoeff() < tol);
  CHECK((back.theta - tr.theta).cwiseAbs().maxCoeff() < tol);
  CHECK((back.theta_dot - tr.theta_dot).cwiseAbs().maxCoeff() < tol);
  CHECK(back.events == tr.events);
  CHECK(back.settle_index == tr.settle_index);
  CHECK(format_trace_csv(back) == format_trace_csv(tr));
}

TEST_CASE("trace csv: header only and malformed input") {
  const MultiTrace empty = parse_trace_csv("t,p,theta_1,theta_2,theta_dot_1,theta_dot_2,event\n");
  CHECK(empty.rows() == 0);
  CHECK(empty.fingers() == 2);
  CHECK_THROWS_AS(parse_trace_csv(""), Error);
  CHECK_THROWS_AS(parse_trace_csv("time,p,event\n"), Error);
  try {
    parse_trace_csv("t,p,theta_1,theta_dot_1,event\n0,0,x,0,\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
  }
  CHECK_THROWS_AS(parse_trace_csv("t,p,theta_1,theta_dot_1,event\n0,0,0\n"), Error);
}

TEST_CASE("trace file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "softtwin_trace_test.csv";
  const MultiTrace tr = nominal_trace();
  write_trace(tr, path);
  CHECK(format_trace_csv(read_trace(path)) == format_trace_csv(tr));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_trace(path), Error);
}

TEST_CASE("summary formatting") {
  CHECK(speed_label(5.0 * std::numbers::pi / 3.0) == "5pi/3");
  CHECK(speed_label(2.0 * std::numbers::pi) == "2pi");
  CHECK(speed_label(std::numbers::pi / 12.0) == "pi/12");
  CHECK(speed_label(std::numbers::pi) == "pi");

  Summary s;
  s.scenario = "train";
  s.seed = 3;
  s.greedy_policy = std::vector<std::optional<double>>{5.0 * std::numbers::pi / 3.0, std::nullopt};
  const std::string text = format_summary(s);
  CHECK(text.find("scenario: train") != std::string::npos);
  CHECK(text.find("seed: 3") != std::string::npos);
  CHECK(text.find("mean_e_ss: null") != std::string::npos);
  CHECK(text.find("{0: 5pi/3, 1: unvisited}") != std::string::npos);
}

TEST_CASE("result tables") {
  std::vector<TrialRecord> trials{{0, 11, 0.7, 1.9, 0.01}, {1, 12, 0.71, 1.88, -0.02}};
  const std::string csv = format_trials_csv(trials);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  QTable q(2, 3);
  q.values(1, 2) = -0.005;
  const std::string qcsv = format_qtable_csv(q);
  CHECK(std::count(qcsv.begin(), qcsv.end(), '\n') == 3);
  CHECK(qcsv.find("-0.005") != std::string::npos);
}
