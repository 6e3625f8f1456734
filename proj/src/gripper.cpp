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

#include "softtwin/gripper.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "softtwin/error.hpp"
#include "softtwin/random.hpp"

namespace softtwin {

GripperSystem default_gripper() {
  GripperSystem g;
  ActuatorParams second;
  second.omega_n = 1.75;
  second.pressure_gain = 1.75 * 1.75;
  g.fingers = {ActuatorParams{}, second};
  return g;
}

std::vector<double> calibrate_gains(GripperSystem& gripper, double target_theta) {
  if (!(gripper.pump.p_final > 0.0)) {
    throw Error(ErrorKind::Calibration, "calibrate_gains: final pressure must be > 0");
  }
  std::vector<double> gains;
  gains.reserve(gripper.size());
  for (auto& finger : gripper.fingers) {
    require(target_theta > 0.0 && target_theta <= finger.theta_max,
            ErrorKind::InvalidArgument, "calibrate_gains: target_theta must lie in (0, theta_max]");
    finger.pressure_gain = finger.omega_n * finger.omega_n * target_theta / gripper.pump.p_final;
    gains.push_back(finger.pressure_gain);
  }
  return gains;
}

namespace {

void append_event(std::string& row, const char* event) {
  if (!row.empty()) row += '|';
  row += event;
}

}  // namespace

MultiTrace simulate_grasp(const GripperSystem& gripper, const GraspCommand& cmd,
                          const GraspOptions& options) {
  validate(gripper.pump);
  require(!gripper.fingers.empty(), ErrorKind::InvalidArgument,
          "simulate_grasp: gripper has no fingers");
  require(options.dt > 0.0, ErrorKind::InvalidArgument, "simulate_grasp: dt must be > 0");
  require(cmd.hold_duration >= 0.0, ErrorKind::InvalidArgument,
          "simulate_grasp: hold_duration must be >= 0");
  if (!(cmd.motor_speed > 0.0 && cmd.motor_speed <= gripper.pump.omega_max)) {
    throw Error(ErrorKind::CommandRange, "simulate_grasp: motor speed must lie in (0, " +
                                             std::to_string(gripper.pump.omega_max) + "]");
  }

  const std::size_t n = gripper.size();
  std::vector<ActuatorParams> params = gripper.fingers;
  for (auto& p : params) {
    validate(p);
    require(cmd.target_theta > 0.0 && cmd.target_theta <= p.theta_max,
            ErrorKind::InvalidArgument, "simulate_grasp: target_theta must lie in (0, theta_max]");
  }
  if (options.uncertainty) {
    const Sigmas sigmas = sigma_for_speed(options.table, cmd.motor_speed);
    for (std::size_t i = 0; i < n; ++i) {
      params[i] = apply_sample(params[i], sample_params(params[i], sigmas,
                                                        derive_seed(options.seed, i)));
    }
  }

  const double dt = options.dt;
  const auto hold_steps = std::llround(cmd.hold_duration / dt);
  const auto quiet_needed = std::max<long long>(1, std::llround(options.settle.window / dt));

  std::vector<double> time{0.0};
  std::vector<double> pressure{0.0};
  std::vector<double> theta(n, 0.0);
  std::vector<double> theta_dot(n, 0.0);
  std::vector<std::string> events{""};
  std::optional<Eigen::Index> settle_index;

  std::vector<ActuatorState> state(n);
  std::vector<long long> quiet(n, 0);
  PumpState ps{0.0, gripper.pump.p_final};
  bool pumping = true;
  long long held = 0;
  long long step = 0;

  while (pumping || held < hold_steps) {
    const PumpState next = pumping ? pump_step(gripper.pump, ps, cmd.motor_speed, dt) : ps;
    const PressureRamp ramp{ps.pressure, next.pressure};
    const bool moved = next.pressure != ps.pressure;
    ps = next;
    ++step;

    std::string event;
    bool any_clamp = false;
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = actuator_step(state[i], ramp, params[i], dt);
      any_clamp = any_clamp || state[i].clamped;
    }
    if (any_clamp) append_event(event, trace_event::kClamp);
    if (pumping && ps.pressure >= gripper.pump.p_final) {
      pumping = false;
      append_event(event, trace_event::kPumpStop);
    }
    if (!pumping && !moved) ++held;

    bool all_quiet = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!pumping && !moved && std::abs(state[i].theta_dot) < options.settle.velocity_tol) {
        ++quiet[i];
      } else {
        quiet[i] = 0;
      }
      all_quiet = all_quiet && quiet[i] >= quiet_needed;
    }
    if (all_quiet && !settle_index) {
      settle_index = static_cast<Eigen::Index>(time.size());
      append_event(event, trace_event::kSettled);
    }

    time.push_back(static_cast<double>(step) * dt);
    pressure.push_back(ps.pressure);
    for (std::size_t i = 0; i < n; ++i) {
      theta.push_back(state[i].theta);
      theta_dot.push_back(state[i].theta_dot);
    }
    events.push_back(std::move(event));
  }

  const auto rows = static_cast<Eigen::Index>(time.size());
  const auto cols = static_cast<Eigen::Index>(n);
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  MultiTrace trace;
  trace.time = Eigen::Map<const Eigen::VectorXd>(time.data(), rows);
  trace.pressure = Eigen::Map<const Eigen::VectorXd>(pressure.data(), rows);
  trace.theta = Eigen::Map<const RowMajor>(theta.data(), rows, cols);
  trace.theta_dot = Eigen::Map<const RowMajor>(theta_dot.data(), rows, cols);
  trace.events = std::move(events);
  trace.reference = cmd.target_theta;
  trace.settle_index = settle_index;
  trace.finger_params = std::move(params);
  return trace;
}

CoordinationError coordination_error(const MultiTrace& trace) {
  if (trace.fingers() < 2) {
    throw Error(ErrorKind::NotApplicable, "coordination_error: needs at least two fingers");
  }
  require(trace.rows() > 0, ErrorKind::InvalidArgument, "coordination_error: empty trace");

  const Eigen::VectorXd spread =
      trace.theta.rowwise().maxCoeff() - trace.theta.rowwise().minCoeff();
  const Eigen::Index end = trace.settle_index.value_or(trace.rows() - 1);
  const double transient = spread.head(end + 1).maxCoeff();

  const double t_last = trace.time(trace.rows() - 1);
  Eigen::Index first = trace.rows() - 1;
  while (first > 0 && trace.time(first - 1) >= t_last - 1.0 - 1e-9) --first;
  const double steady = spread.tail(trace.rows() - first).maxCoeff();

  constexpr double to_deg = 180.0 / std::numbers::pi;
  return {transient * to_deg, steady * to_deg};
}

}  // namespace softtwin
