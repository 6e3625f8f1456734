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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "softtwin/dynamics.hpp"
#include "softtwin/gripper.hpp"
#include "softtwin/qlearn.hpp"
#include "softtwin/uncertainty.hpp"

namespace softtwin {

struct QLearnConfig {
  double alpha = 0.1;
  double gamma = 0.95;
  double epsilon0 = 0.2;
  double epsilon_decay = 0.9;
  std::size_t episodes = 10;
  std::size_t steps_per_episode = 20;
  std::size_t trials_per_step = 50;
  std::vector<double> bin_edges = default_bin_edges();

  friend bool operator==(const QLearnConfig&, const QLearnConfig&) = default;
};

/// Everything a scenario needs. Default-constructed values reproduce the
/// two-finger setup: zeta 0.7 / 0.8, omega_n 1.9 and 1.75 rad/s, the six-row
/// speed table and alpha = 0.1, gamma = 0.95.
struct TwinConfig {
  std::vector<ActuatorParams> fingers = default_gripper().fingers;
  PumpParams pump{};
  SpeedUncertaintyTable uncertainty = SpeedUncertaintyTable::defaults();
  QLearnConfig qlearn{};
  SettleCriterion settle{};
  std::uint64_t seed = 0;
  double dt = 1e-3;
  double target_theta = 1.0;
  double hold_duration = 30.0;
  unsigned threads = 1;

  friend bool operator==(const TwinConfig&, const TwinConfig&) = default;
};

/// Throws Error(Configuration) whose message starts with the field path.
void validate(const TwinConfig& config);

/// Parses JSON text. Empty (or whitespace-only) text gives the defaults;
/// missing keys keep their defaults; unknown keys are rejected.
TwinConfig parse_config(std::string_view text, std::string_view source = "<config>");

TwinConfig load_config(const std::filesystem::path& path);

std::string serialize_config(const TwinConfig& config);

/// FNV-1a over the canonical serialization.
std::uint64_t config_hash(const TwinConfig& config);

GripperSystem make_gripper(const TwinConfig& config);

EnvConfig make_env_config(const TwinConfig& config);

/// Environment variable naming the config file used when --config is absent.
inline constexpr const char* kConfigEnvVar = "SOFTTWIN_CONFIG";

struct RunManifest {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::string scenario;
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::string> argv;
  std::string config;  // canonical serialization, enough to replay
};

std::string to_json(const RunManifest& manifest);

std::string utc_timestamp();

}  // namespace softtwin
