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
#include <numbers>
#include <vector>

namespace softtwin {

/// Exponential stiffness decay over loading/unloading cycles (Mullins-type
/// softening): K(k) = K_inf + (K_0 - K_inf) exp(-lambda k).
struct SofteningLaw {
  double k_inf_ratio = 0.9;
  double lambda = 0.01;  // per cycle; 0 disables softening

  friend bool operator==(const SofteningLaw&, const SofteningLaw&) = default;
};

/// Lumped constants of one pneumatic bending actuator in mass-normalized
/// form. `m_eq` is kept for bookkeeping only and never enters the dynamics.
struct ActuatorParams {
  double zeta_fwd = 0.7;
  double zeta_bwd = 0.8;
  double omega_n = 1.9;   // rad/s
  double m_eq = 0.18;
  double pressure_gain = 3.61;  // rad/s^2 per pressure unit
  double theta_max = 8.0 * std::numbers::pi / 9.0;
  SofteningLaw softening{};

  friend bool operator==(const ActuatorParams&, const ActuatorParams&) = default;
};

/// Throws Error(InvalidParameter) naming the offending field.
void validate(const ActuatorParams& params);

struct MaterialGeometry {
  double young_modulus;   // Pa
  double second_moment;   // m^4
  double length;          // m
};

enum class Direction : std::uint8_t { Hold, Loading, Unloading };

struct ActuatorState {
  double theta = 0.0;
  double theta_dot = 0.0;
  Direction direction = Direction::Hold;
  // Last non-Hold direction; Hold means the actuator has never moved.
  Direction last_active = Direction::Hold;
  std::uint64_t cycle_count = 0;
  // Set when the last step hit the operating-range clamp.
  bool clamped = false;

  friend bool operator==(const ActuatorState&, const ActuatorState&) = default;
};

struct PumpParams {
  double b_gain = 1.0;                           // pressure units per rad
  double omega_max = 2.0 * std::numbers::pi;     // rad/s
  double p_final = 1.0;
  double vent_speed = 2.0 * std::numbers::pi;    // rad/s, deflation rate -B*w

  friend bool operator==(const PumpParams&, const PumpParams&) = default;
};

void validate(const PumpParams& params);

struct PumpState {
  double pressure = 0.0;
  // Upper pressure clamp; non-positive means unlimited.
  double p_max = 0.0;
};

/// Pressure at the start and end of one step; the drive is linear between.
struct PressureRamp {
  double begin = 0.0;
  double end = 0.0;
};

double spring_constant(const MaterialGeometry& geom);

double damping_coefficient(double zeta, double omega_n);

/// Inflation only. Throws CommandRange for omega outside [0, omega_max].
PumpState pump_step(const PumpParams& pump, PumpState state, double omega, double dt);

/// Deflation through the vent at rate B * vent_omega, clamped at zero.
PumpState vent_step(const PumpParams& pump, PumpState state, double vent_omega, double dt);

double hysteresis_zeta(Direction direction, Direction last_active,
                       const ActuatorParams& params);

inline double hysteresis_zeta(const ActuatorState& state, const ActuatorParams& params) {
  return hysteresis_zeta(state.direction, state.last_active, params);
}

/// Softened stiffness after `cycle_count` cycles. Exactly omega_n^2 when no
/// decay has occurred.
double effective_stiffness(const ActuatorParams& params, std::uint64_t cycle_count);

/// Effective natural frequency sqrt(K(k)); exactly omega_n when no decay.
double apply_cycle_softening(const ActuatorParams& params, std::uint64_t cycle_count);

Direction direction_of(const PressureRamp& ramp) noexcept;

/// Advances one actuator by dt with RK4. The hysteresis branch is chosen from
/// the sign of the pressure change over the step, and theta is clamped to
/// [0, theta_max] with the velocity zeroed on contact.
ActuatorState actuator_step(const ActuatorState& state, const PressureRamp& pressure,
                            const ActuatorParams& params, double dt);

/// Constant-pressure convenience overload.
inline ActuatorState actuator_step(const ActuatorState& state, double pressure,
                                   const ActuatorParams& params, double dt) {
  return actuator_step(state, PressureRamp{pressure, pressure}, params, dt);
}

double steady_state_angle(const ActuatorParams& params, double p_final);

/// One inflate / hold / vent / hold cycle sampled as a closed path in the
/// (pressure, theta) plane.
struct HysteresisLoop {
  std::vector<double> pressure;
  std::vector<double> theta;
  std::vector<Direction> direction;
  // Signed shoelace area; positive when the unloading branch lies above the
  // loading branch.
  double area = 0.0;
};

struct CycleProfile {
  double inflate_speed = 2.0 * std::numbers::pi;
  double vent_speed = 2.0 * std::numbers::pi;
  double hold = 20.0;  // s at the top and at the bottom
  double dt = 1e-3;
};

HysteresisLoop hysteresis_cycle(const ActuatorParams& params, const PumpParams& pump,
                                const CycleProfile& profile);

double loop_area(const std::vector<double>& pressure, const std::vector<double>& theta);

/// Loop area attributable to direction-dependent damping: the cycle's area
/// minus the area of the same cycle run with zeta_bwd = zeta_fwd. The rate
/// lag of the linear model is common to both and cancels.
double hysteresis_area(const ActuatorParams& params, const PumpParams& pump,
                       const CycleProfile& profile);

}  // namespace softtwin
