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

#include "softtwin/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "softtwin/error.hpp"
#include "softtwin/integrator.hpp"

namespace softtwin {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::CommandRange: return "command-range";
    case ErrorKind::NumericFault: return "numeric-fault";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::DegenerateDistribution: return "degenerate-distribution";
    case ErrorKind::Horizon: return "horizon";
    case ErrorKind::Calibration: return "calibration";
    case ErrorKind::NotApplicable: return "not-applicable";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Index: return "index";
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Lifecycle: return "lifecycle";
  }
  return "unknown";
}

namespace {

void check_param(bool ok, const char* field, const std::string& rule) {
  if (!ok) throw Error(ErrorKind::InvalidParameter, std::string(field) + ": " + rule);
}

}  // namespace

void validate(const ActuatorParams& p) {
  check_param(std::isfinite(p.zeta_fwd) && p.zeta_fwd > 0.0, "zeta_fwd", "must be > 0");
  check_param(std::isfinite(p.zeta_bwd) && p.zeta_bwd > 0.0, "zeta_bwd", "must be > 0");
  check_param(p.zeta_bwd >= p.zeta_fwd, "zeta_bwd", "must be >= zeta_fwd");
  check_param(std::isfinite(p.omega_n) && p.omega_n > 0.0, "omega_n", "must be > 0");
  check_param(std::isfinite(p.m_eq), "m_eq", "must be finite");
  check_param(std::isfinite(p.pressure_gain) && p.pressure_gain > 0.0, "pressure_gain",
              "must be > 0");
  check_param(std::isfinite(p.theta_max) && p.theta_max > 0.0 &&
                  p.theta_max <= std::numbers::pi,
              "theta_max", "must lie in (0, pi]");
  check_param(p.softening.k_inf_ratio > 0.0 && p.softening.k_inf_ratio <= 1.0,
              "softening.k_inf_ratio", "must lie in (0, 1]");
  check_param(std::isfinite(p.softening.lambda) && p.softening.lambda >= 0.0,
              "softening.lambda", "must be >= 0");
}

void validate(const PumpParams& p) {
  check_param(std::isfinite(p.b_gain) && p.b_gain > 0.0, "b_gain", "must be > 0");
  check_param(std::isfinite(p.omega_max) && p.omega_max > 0.0, "omega_max", "must be > 0");
  check_param(std::isfinite(p.p_final) && p.p_final > 0.0, "p_final", "must be > 0");
  check_param(std::isfinite(p.vent_speed) && p.vent_speed > 0.0, "vent_speed",
              "must be > 0");
}

double spring_constant(const MaterialGeometry& g) {
  check_param(std::isfinite(g.young_modulus) && g.young_modulus > 0.0, "young_modulus",
              "must be > 0");
  check_param(std::isfinite(g.second_moment) && g.second_moment > 0.0, "second_moment",
              "must be > 0");
  check_param(std::isfinite(g.length) && g.length > 0.0, "length", "must be > 0");
  return 2.0 * g.young_modulus * g.second_moment / (g.length * g.length);
}

double damping_coefficient(double zeta, double omega_n) {
  require(zeta >= 0.0, ErrorKind::InvalidArgument, "damping_coefficient: zeta must be >= 0");
  require(omega_n > 0.0, ErrorKind::InvalidArgument,
          "damping_coefficient: omega_n must be > 0");
  return 2.0 * zeta * omega_n;
}

PumpState pump_step(const PumpParams& pump, PumpState state, double omega, double dt) {
  if (!(omega >= 0.0 && omega <= pump.omega_max)) {
    throw Error(ErrorKind::CommandRange, "motor speed " + std::to_string(omega) +
                                             " outside [0, " +
                                             std::to_string(pump.omega_max) + "]");
  }
  require(dt > 0.0, ErrorKind::InvalidArgument, "pump_step: dt must be > 0");
  state.pressure += pump.b_gain * omega * dt;
  if (state.p_max > 0.0 && state.pressure > state.p_max) state.pressure = state.p_max;
  return state;
}

PumpState vent_step(const PumpParams& pump, PumpState state, double vent_omega, double dt) {
  if (!(vent_omega >= 0.0 && vent_omega <= pump.omega_max)) {
    throw Error(ErrorKind::CommandRange, "vent speed " + std::to_string(vent_omega) +
                                             " outside [0, " +
                                             std::to_string(pump.omega_max) + "]");
  }
  require(dt > 0.0, ErrorKind::InvalidArgument, "vent_step: dt must be > 0");
  state.pressure -= pump.b_gain * vent_omega * dt;
  if (state.pressure < 0.0) state.pressure = 0.0;
  return state;
}

double hysteresis_zeta(Direction direction, Direction last_active,
                       const ActuatorParams& params) {
  switch (direction) {
    case Direction::Loading: return params.zeta_fwd;
    case Direction::Unloading: return params.zeta_bwd;
    case Direction::Hold: break;
  }
  return last_active == Direction::Unloading ? params.zeta_bwd : params.zeta_fwd;
}

double effective_stiffness(const ActuatorParams& params, std::uint64_t cycle_count) {
  const double k0 = params.omega_n * params.omega_n;
  const auto& law = params.softening;
  if (cycle_count == 0 || law.lambda == 0.0) return k0;
  const double k_inf = law.k_inf_ratio * k0;
  return k_inf + (k0 - k_inf) * std::exp(-law.lambda * static_cast<double>(cycle_count));
}

double apply_cycle_softening(const ActuatorParams& params, std::uint64_t cycle_count) {
  if (cycle_count == 0 || params.softening.lambda == 0.0) return params.omega_n;
  return std::sqrt(effective_stiffness(params, cycle_count));
}

Direction direction_of(const PressureRamp& ramp) noexcept {
  if (ramp.end > ramp.begin) return Direction::Loading;
  if (ramp.end < ramp.begin) return Direction::Unloading;
  return Direction::Hold;
}

ActuatorState actuator_step(const ActuatorState& state, const PressureRamp& pressure,
                            const ActuatorParams& params, double dt) {
  if (!std::isfinite(state.theta) || !std::isfinite(state.theta_dot) ||
      !std::isfinite(pressure.begin) || !std::isfinite(pressure.end)) {
    throw Error(ErrorKind::NumericFault, "actuator_step: non-finite state or pressure");
  }
  require(dt > 0.0, ErrorKind::InvalidArgument, "actuator_step: dt must be > 0");

  ActuatorState next = state;
  next.direction = direction_of(pressure);
  if (next.direction != Direction::Hold) {
    if (next.direction == Direction::Unloading && state.last_active == Direction::Loading) {
      ++next.cycle_count;
    }
    next.last_active = next.direction;
  }

  const double stiffness = effective_stiffness(params, next.cycle_count);
  const double omega = apply_cycle_softening(params, next.cycle_count);
  const double zeta = hysteresis_zeta(next, params);

  const LinearOscillator<double> rhs{2.0 * zeta * omega, stiffness, params.pressure_gain,
                                     pressure.begin,     pressure.end, 0.0, dt};
  const State2<double> y0(state.theta, state.theta_dot);
  const State2<double> y = rk4_step(rhs, 0.0, y0, dt);
  if (!y.allFinite()) throw Error(ErrorKind::NumericFault, "actuator_step: state diverged");

  next.theta = y(0);
  next.theta_dot = y(1);
  next.clamped = false;
  if (next.theta > params.theta_max) {
    next.theta = params.theta_max;
    next.theta_dot = 0.0;
    next.clamped = true;
  } else if (next.theta < 0.0) {
    next.theta = 0.0;
    next.theta_dot = 0.0;
    next.clamped = true;
  }
  return next;
}

double steady_state_angle(const ActuatorParams& params, double p_final) {
  require(p_final >= 0.0, ErrorKind::InvalidArgument,
          "steady_state_angle: p_final must be >= 0");
  return params.pressure_gain * p_final / (params.omega_n * params.omega_n);
}

double loop_area(const std::vector<double>& pressure, const std::vector<double>& theta) {
  require(pressure.size() == theta.size(), ErrorKind::InvalidArgument,
          "loop_area: series length mismatch");
  const std::size_t n = pressure.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    twice += pressure[i] * theta[j] - pressure[j] * theta[i];
  }
  return 0.5 * twice;
}

HysteresisLoop hysteresis_cycle(const ActuatorParams& params, const PumpParams& pump,
                                const CycleProfile& profile) {
  validate(params);
  validate(pump);
  require(profile.dt > 0.0 && profile.hold >= 0.0, ErrorKind::InvalidArgument,
          "hysteresis_cycle: dt must be > 0 and hold >= 0");
  require(profile.inflate_speed > 0.0 && profile.vent_speed > 0.0,
          ErrorKind::CommandRange, "hysteresis_cycle: pump speeds must be > 0");

  HysteresisLoop loop;
  ActuatorState act;
  PumpState ps{0.0, pump.p_final};
  const auto record = [&] {
    loop.pressure.push_back(ps.pressure);
    loop.theta.push_back(act.theta);
    loop.direction.push_back(act.direction);
  };
  const auto advance = [&](PumpState next) {
    act = actuator_step(act, PressureRamp{ps.pressure, next.pressure}, params, profile.dt);
    ps = next;
    record();
  };
  const auto hold_steps = static_cast<std::size_t>(std::llround(profile.hold / profile.dt));

  record();
  while (ps.pressure < pump.p_final) {
    advance(pump_step(pump, ps, profile.inflate_speed, profile.dt));
  }
  for (std::size_t i = 0; i < hold_steps; ++i) advance(ps);
  while (ps.pressure > 0.0) {
    advance(vent_step(pump, ps, profile.vent_speed, profile.dt));
  }
  for (std::size_t i = 0; i < hold_steps; ++i) advance(ps);

  loop.area = loop_area(loop.pressure, loop.theta);
  return loop;
}

double hysteresis_area(const ActuatorParams& params, const PumpParams& pump,
                       const CycleProfile& profile) {
  ActuatorParams symmetric = params;
  symmetric.zeta_bwd = symmetric.zeta_fwd;
  return hysteresis_cycle(params, pump, profile).area -
         hysteresis_cycle(symmetric, pump, profile).area;
}

}  // namespace softtwin
