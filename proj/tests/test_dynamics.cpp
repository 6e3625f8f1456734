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

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "softtwin/dynamics.hpp"
#include "softtwin/error.hpp"

using namespace softtwin;

namespace {

constexpr double kPi = std::numbers::pi;

// Max |theta - analytic| over [0, horizon] for the unit step at constant pressure.
double step_response_error(double dt, double horizon = 10.0) {
  ActuatorParams p;  // zeta 0.7, omega_n 1.9, g = omega_n^2
  ActuatorState s;
  double worst = 0.0;
  const auto steps = std::llround(horizon / dt);
  for (long long k = 1; k <= steps; ++k) {
    s = actuator_step(s, 1.0, p, dt);
    const double t = static_cast<double>(k) * dt;
    worst = std::max(worst, std::abs(s.theta - oracle::underdamped_step(0.7, 1.9, t)));
  }
  return worst;
}

}  // namespace

TEST_CASE("spring_constant") {
  CHECK(spring_constant({1.0, 1.0, std::sqrt(2.0)}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(spring_constant({2.0, 3.0, 2.0}) == 3.0);
  double prev = spring_constant({2.0, 3.0, 0.5});
  for (double len = 0.6; len < 3.0; len += 0.1) {
    const double k = spring_constant({2.0, 3.0, len});
    CHECK(k < prev);
    prev = k;
  }
  CHECK_THROWS_AS(spring_constant({0.0, 1.0, 1.0}), Error);
  CHECK_THROWS_AS(spring_constant({1.0, -1.0, 1.0}), Error);
  try {
    spring_constant({1.0, 1.0, 0.0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParameter);
  }
}

TEST_CASE("damping_coefficient") {
  CHECK(damping_coefficient(0.7, 1.9) == doctest::Approx(2.66).epsilon(1e-14));
  CHECK(damping_coefficient(0.8, 1.9) == doctest::Approx(3.04).epsilon(1e-14));
  CHECK(damping_coefficient(0.0, 1.9) == 0.0);
  CHECK_THROWS_AS(damping_coefficient(-0.1, 1.9), Error);
  CHECK_THROWS_AS(damping_coefficient(0.7, 0.0), Error);
}

TEST_CASE("pump_step") {
  PumpParams pump;
  SUBCASE("no drive") {
    CHECK(pump_step(pump, {}, 0.0, 0.37).pressure == 0.0);
  }
  SUBCASE("full speed for one second") {
    CHECK(pump_step(pump, {}, 2.0 * kPi, 1.0).pressure == doctest::Approx(2.0 * kPi));
  }
  SUBCASE("two half steps equal one full step") {
    const PumpState full = pump_step(pump, {}, 2.5, 0.2);
    const PumpState half = pump_step(pump, pump_step(pump, {}, 2.5, 0.1), 2.5, 0.1);
    CHECK(full.pressure == half.pressure);
  }
  SUBCASE("clamped at p_max") {
    CHECK(pump_step(pump, {0.9, 1.0}, 2.0 * kPi, 1.0).pressure == 1.0);
  }
  SUBCASE("speed range") {
    CHECK_THROWS_AS(pump_step(pump, {}, -0.1, 0.1), Error);
    CHECK_THROWS_AS(pump_step(pump, {}, 2.0 * kPi + 1e-9, 0.1), Error);
    try {
      pump_step(pump, {}, 7.0, 0.1);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::CommandRange);
    }
  }
  SUBCASE("vent stops at zero") {
    CHECK(vent_step(pump, {0.01, 0.0}, 2.0 * kPi, 1.0).pressure == 0.0);
    CHECK(vent_step(pump, {1.0, 0.0}, 1.0, 0.25).pressure == doctest::Approx(0.75));
  }
}

TEST_CASE("hysteresis_zeta") {
  const ActuatorParams p;
  CHECK(hysteresis_zeta(Direction::Loading, Direction::Hold, p) == 0.7);
  CHECK(hysteresis_zeta(Direction::Unloading, Direction::Loading, p) == 0.8);
  CHECK(hysteresis_zeta(Direction::Hold, Direction::Loading, p) == 0.7);
  CHECK(hysteresis_zeta(Direction::Hold, Direction::Unloading, p) == 0.8);
  CHECK(hysteresis_zeta(Direction::Hold, Direction::Hold, p) == 0.7);
}

TEST_CASE("actuator_step: equilibrium is bit-identical") {
  const ActuatorParams p;
  const ActuatorState rest;
  ActuatorState s = rest;
  for (int i = 0; i < 100000; ++i) s = actuator_step(s, 0.0, p, 1e-3);
  CHECK(s == rest);
}

TEST_CASE("actuator_step: matches the analytic step response") {
  CHECK(step_response_error(1e-3) < 1e-4);
}

TEST_CASE("actuator_step: fourth-order convergence") {
  const double e1 = step_response_error(1e-2);
  const double e2 = step_response_error(5e-3);
  const double e3 = step_response_error(2.5e-3);
  CHECK(e1 / e2 >= 8.0);
  CHECK(e2 / e3 >= 8.0);
}

TEST_CASE("actuator_step: operating-range clamp") {
  const ActuatorParams p;
  ActuatorState s;
  bool clamped = false;
  for (int i = 0; i < 20000; ++i) {
    s = actuator_step(s, 5.0, p, 1e-3);
    clamped = clamped || s.clamped;
  }
  CHECK(clamped);
  CHECK(s.theta == p.theta_max);
  CHECK(s.theta_dot == 0.0);
  CHECK(p.theta_max == doctest::Approx(8.0 * kPi / 9.0));
}

TEST_CASE("actuator_step: numeric faults") {
  const ActuatorParams p;
  ActuatorState s;
  s.theta = std::nan("");
  CHECK_THROWS_AS(actuator_step(s, 1.0, p, 1e-3), Error);
  try {
    actuator_step(ActuatorState{}, std::numeric_limits<double>::infinity(), p, 1e-3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NumericFault);
  }
}

TEST_CASE("actuator_step: direction and cycle counting") {
  ActuatorParams p;
  ActuatorState s;
  s = actuator_step(s, PressureRamp{0.0, 0.1}, p, 1e-3);
  CHECK(s.direction == Direction::Loading);
  CHECK(s.cycle_count == 0);
  s = actuator_step(s, PressureRamp{0.1, 0.1}, p, 1e-3);
  CHECK(s.direction == Direction::Hold);
  CHECK(hysteresis_zeta(s, p) == 0.7);
  s = actuator_step(s, PressureRamp{0.1, 0.05}, p, 1e-3);
  CHECK(s.direction == Direction::Unloading);
  CHECK(s.cycle_count == 1);
  s = actuator_step(s, PressureRamp{0.05, 0.0}, p, 1e-3);
  CHECK(s.cycle_count == 1);
  s = actuator_step(s, PressureRamp{0.0, 0.0}, p, 1e-3);
  CHECK(hysteresis_zeta(s, p) == 0.8);
  s = actuator_step(s, PressureRamp{0.0, 0.1}, p, 1e-3);
  s = actuator_step(s, PressureRamp{0.1, 0.0}, p, 1e-3);
  CHECK(s.cycle_count == 2);
}

TEST_CASE("clamp safety under random pressure sequences") {
  std::mt19937_64 gen(1234);
  std::uniform_real_distribution<double> pressure(0.0, 4.0);
  std::uniform_int_distribution<int> hold(1, 400);
  ActuatorParams p;
  for (int run = 0; run < 40; ++run) {
    ActuatorState s;
    double prev = 0.0;
    for (int seg = 0; seg < 20; ++seg) {
      const double next = pressure(gen);
      const int n = hold(gen);
      for (int k = 0; k < n; ++k) {
        const double a = prev + (next - prev) * k / n;
        const double b = prev + (next - prev) * (k + 1) / n;
        s = actuator_step(s, PressureRamp{a, b}, p, 5e-3);
        REQUIRE(s.theta >= 0.0);
        REQUIRE(s.theta <= p.theta_max);
      }
      prev = next;
    }
  }
}

TEST_CASE("cycle softening") {
  ActuatorParams p;
  p.softening = {0.9, 0.01};
  CHECK(effective_stiffness(p, 0) == 1.9 * 1.9);
  CHECK(apply_cycle_softening(p, 0) == 1.9);
  double prev = effective_stiffness(p, 0);
  for (std::uint64_t k = 1; k < 2000; ++k) {
    const double kn = effective_stiffness(p, k);
    CHECK(kn <= prev);
    prev = kn;
  }
  CHECK(effective_stiffness(p, 100000) == doctest::Approx(3.249).epsilon(1e-12));
  CHECK(apply_cycle_softening(p, 50) == doctest::Approx(std::sqrt(effective_stiffness(p, 50))));
  p.softening.lambda = 0.0;
  CHECK(effective_stiffness(p, 500) == 1.9 * 1.9);
}

TEST_CASE("steady_state_angle") {
  ActuatorParams p;
  CHECK(steady_state_angle(p, 0.0) == 0.0);
  CHECK(steady_state_angle(p, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(steady_state_angle(p, 0.6) == doctest::Approx(0.6 * steady_state_angle(p, 1.0)));
  ActuatorParams stiffer = p;
  stiffer.omega_n = 2.0;
  CHECK(steady_state_angle(stiffer, 1.0) < steady_state_angle(p, 1.0));
  CHECK_THROWS_AS(steady_state_angle(p, -1.0), Error);

  // 60 s simulated hold at constant pressure
  p.pressure_gain = 2.0;
  ActuatorState s;
  for (int i = 0; i < 60000; ++i) s = actuator_step(s, 0.8, p, 1e-3);
  CHECK(std::abs(s.theta - steady_state_angle(p, 0.8)) < 1e-3);
}

TEST_CASE("parameter validation names the field") {
  ActuatorParams p;
  CHECK_NOTHROW(validate(p));
  p.zeta_bwd = 0.6;
  try {
    validate(p);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("zeta_bwd") != std::string::npos);
  }
  p = {};
  p.theta_max = 4.0;
  CHECK_THROWS_AS(validate(p), Error);
  p = {};
  p.softening.k_inf_ratio = 0.0;
  CHECK_THROWS_AS(validate(p), Error);
}

TEST_CASE("hysteresis loop area") {
  ActuatorParams p;
  p.softening.lambda = 0.0;
  const PumpParams pump;
  const CycleProfile profile;
  const HysteresisLoop loop = hysteresis_cycle(p, pump, profile);
  CHECK(loop.area > 0.0);
  CHECK(loop.pressure.front() == 0.0);
  CHECK(loop.pressure.back() == 0.0);
  CHECK(hysteresis_area(p, pump, profile) > 0.0);

  ActuatorParams symmetric = p;
  symmetric.zeta_bwd = symmetric.zeta_fwd;
  CHECK(hysteresis_area(symmetric, pump, profile) == 0.0);

  // A more damped unloading branch widens the loop further.
  ActuatorParams wider = p;
  wider.zeta_bwd = 0.9;
  CHECK(hysteresis_area(wider, pump, profile) > hysteresis_area(p, pump, profile));
}

TEST_CASE("loop_area orientation") {
  // unit square traversed counter-clockwise in (p, theta)
  CHECK(loop_area({0, 1, 1, 0}, {0, 0, 1, 1}) == 1.0);
  CHECK(loop_area({0, 0, 1, 1}, {0, 1, 1, 0}) == -1.0);
}
