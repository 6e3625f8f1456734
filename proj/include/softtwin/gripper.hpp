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

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "softtwin/dynamics.hpp"
#include "softtwin/uncertainty.hpp"

namespace softtwin {

/// n fingers behind a single pump: one input, n outputs.
struct GripperSystem {
  PumpParams pump{};
  std::vector<ActuatorParams> fingers;

  std::size_t size() const noexcept { return fingers.size(); }
};

/// The default two-finger gripper (omega_n 1.9 and 1.75 rad/s).
GripperSystem default_gripper();

struct GraspCommand {
  double motor_speed = 2.0 * std::numbers::pi;  // rad/s
  double target_theta = 1.0;                   // rad
  double hold_duration = 30.0;                 // s after the pump stops
};

/// Sets every finger's pressure gain so that its nominal steady-state angle
/// at pump.p_final equals `target_theta`. Returns the gains.
std::vector<double> calibrate_gains(GripperSystem& gripper, double target_theta);

namespace trace_event {
inline constexpr const char* kPumpStop = "pump_stop";
inline constexpr const char* kSettled = "settled";
inline constexpr const char* kClamp = "clamp";
}  // namespace trace_event

/// Sampled gripper response on a uniform time grid. Row k of every series is
/// time[k]; columns of theta / theta_dot are fingers.
struct MultiTrace {
  Eigen::VectorXd time;
  Eigen::VectorXd pressure;
  Eigen::MatrixXd theta;
  Eigen::MatrixXd theta_dot;
  std::vector<std::string> events;  // '|'-joined markers per row, may be empty
  double reference = 0.0;           // common step reference for all fingers
  std::optional<Eigen::Index> settle_index;
  std::vector<ActuatorParams> finger_params;  // as simulated (sampled if uncertain)

  Eigen::Index rows() const noexcept { return time.size(); }
  Eigen::Index fingers() const noexcept { return theta.cols(); }
};

struct GraspOptions {
  double dt = 1e-3;
  bool uncertainty = false;
  SpeedUncertaintyTable table = SpeedUncertaintyTable::defaults();
  std::uint64_t seed = 0;
  SettleCriterion settle{};
};

/// Pumps at cmd.motor_speed up to pump.p_final, then holds for
/// cmd.hold_duration. Every finger is stepped against the same pressure.
/// With uncertainty on, finger i draws (zeta, omega_n) once per run from
/// derive_seed(seed, i) at the spread for the commanded speed.
MultiTrace simulate_grasp(const GripperSystem& gripper, const GraspCommand& cmd,
                          const GraspOptions& options = {});

struct CoordinationError {
  double max_transient_diff_deg;
  double steady_diff_deg;
};

/// Transient: max pairwise |theta_i - theta_j| from t = 0 to the settle
/// marker (whole trace if none). Steady: the same over the final second.
CoordinationError coordination_error(const MultiTrace& trace);

}  // namespace softtwin
