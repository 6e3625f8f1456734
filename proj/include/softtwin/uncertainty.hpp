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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "softtwin/dynamics.hpp"
#include "softtwin/random.hpp"

namespace softtwin {

struct SpeedSigma {
  double speed;          // rad/s
  double sigma_zeta;
  double sigma_omega_n;  // rad/s

  friend bool operator==(const SpeedSigma&, const SpeedSigma&) = default;
};

/// Motor speed -> parameter spread. Speeds strictly increase and both sigma
/// columns are non-increasing: faster motion, less uncertainty.
struct SpeedUncertaintyTable {
  std::vector<SpeedSigma> rows;

  static SpeedUncertaintyTable defaults();

  friend bool operator==(const SpeedUncertaintyTable&, const SpeedUncertaintyTable&) = default;
};

void validate(const SpeedUncertaintyTable& table);

struct Sigmas {
  double zeta = 0.0;
  double omega_n = 0.0;
};

/// Piecewise-linear in speed, clamped to the first/last row outside the table.
Sigmas sigma_for_speed(const SpeedUncertaintyTable& table, double omega);

struct SampledParams {
  double zeta_sample;
  double omega_n_sample;
  std::uint64_t seed;
};

/// Draws zeta ~ N(zeta_fwd, s_z^2) and omega_n ~ N(omega_n, s_w^2), rejecting
/// non-positive draws (at most 100 attempts each).
SampledParams sample_params(const ActuatorParams& nominal, Sigmas sigmas, Rng& rng,
                            std::uint64_t seed_tag = 0);

SampledParams sample_params(const ActuatorParams& nominal, Sigmas sigmas,
                            std::uint64_t seed);

/// Nominal parameters with the sampled zeta/omega_n substituted. The
/// unloading damping keeps its nominal offset above the loading damping.
ActuatorParams apply_sample(const ActuatorParams& nominal, const SampledParams& sample);

struct SettleCriterion {
  double velocity_tol = 1e-4;  // rad/s
  double window = 1.0;         // s of continuous quiet
  double horizon = 120.0;      // s simulated

  friend bool operator==(const SettleCriterion&, const SettleCriterion&) = default;
};

struct SettledRun {
  ActuatorState state;
  double settle_time;  // s, end of the quiet window
};

/// Pumps at `speed` until the pressure reaches `p_target`, then holds until
/// the settle criterion is met. Throws HorizonError (trial 0) on timeout.
SettledRun drive_to_settle(const ActuatorParams& params, const PumpParams& pump,
                           double speed, double p_target, double dt,
                           const SettleCriterion& settle);

struct SseStats {
  double mean_e_ss;
  double std_e_ss;
  std::size_t n_trials;
  double speed;
  double target_theta;
};

struct TrialRecord {
  std::size_t trial;
  std::uint64_t seed;
  double zeta;
  double omega_n;
  double e_ss;
};

struct MonteCarloOptions {
  PumpParams pump{};
  double dt = 1e-3;
  SettleCriterion settle{};
  unsigned threads = 1;
};

struct MonteCarloResult {
  SseStats stats;
  std::vector<TrialRecord> trials;
};

/// Steady-state error spread of one actuator at one motor speed. Trial i
/// samples its parameters from the stream derive_seed(seed, i), so results
/// do not depend on `threads`.
MonteCarloResult monte_carlo_sse(const ActuatorParams& nominal,
                                 const SpeedUncertaintyTable& table, double speed,
                                 double target_theta, std::size_t n_trials,
                                 std::uint64_t seed, const MonteCarloOptions& options = {});

}  // namespace softtwin
