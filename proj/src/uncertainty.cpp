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

#include "softtwin/uncertainty.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "softtwin/error.hpp"
#include "softtwin/parallel.hpp"

namespace softtwin {

SpeedUncertaintyTable SpeedUncertaintyTable::defaults() {
  constexpr double pi = std::numbers::pi;
  return {{{pi / 3.0, 0.12, 0.1},
           {2.0 * pi / 3.0, 0.1, 0.084},
           {pi, 0.08, 0.071},
           {4.0 * pi / 3.0, 0.06, 0.063},
           {5.0 * pi / 3.0, 0.052, 0.055},
           {2.0 * pi, 0.05, 0.055}}};
}

void validate(const SpeedUncertaintyTable& table) {
  require(!table.rows.empty(), ErrorKind::Configuration, "uncertainty table is empty");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const std::string at = "uncertainty.rows[" + std::to_string(i) + "]";
    require(std::isfinite(r.speed) && r.speed > 0.0, ErrorKind::Configuration,
            at + ".speed must be > 0");
    require(std::isfinite(r.sigma_zeta) && r.sigma_zeta >= 0.0, ErrorKind::Configuration,
            at + ".sigma_zeta must be >= 0");
    require(std::isfinite(r.sigma_omega_n) && r.sigma_omega_n >= 0.0,
            ErrorKind::Configuration, at + ".sigma_omega_n must be >= 0");
    if (i == 0) continue;
    const auto& prev = table.rows[i - 1];
    require(r.speed > prev.speed, ErrorKind::Configuration,
            at + ".speed must be strictly increasing");
    require(r.sigma_zeta <= prev.sigma_zeta && r.sigma_omega_n <= prev.sigma_omega_n,
            ErrorKind::Configuration, at + ": sigmas must be non-increasing in speed");
  }
}

Sigmas sigma_for_speed(const SpeedUncertaintyTable& table, double omega) {
  require(!table.rows.empty(), ErrorKind::Configuration, "uncertainty table is empty");
  require(omega > 0.0, ErrorKind::InvalidArgument, "sigma_for_speed: omega must be > 0");
  const auto& rows = table.rows;
  if (omega <= rows.front().speed) return {rows.front().sigma_zeta, rows.front().sigma_omega_n};
  if (omega >= rows.back().speed) return {rows.back().sigma_zeta, rows.back().sigma_omega_n};
  std::size_t hi = 1;
  while (rows[hi].speed < omega) ++hi;
  const auto& a = rows[hi - 1];
  const auto& b = rows[hi];
  const double s = (omega - a.speed) / (b.speed - a.speed);
  return {a.sigma_zeta + s * (b.sigma_zeta - a.sigma_zeta),
          a.sigma_omega_n + s * (b.sigma_omega_n - a.sigma_omega_n)};
}

namespace {

constexpr int kMaxAttempts = 100;

double positive_gaussian(double mean, double sigma, Rng& rng, const char* what) {
  std::normal_distribution<double> standard(0.0, 1.0);
  for (int i = 0; i < kMaxAttempts; ++i) {
    const double x = mean + sigma * standard(rng);
    if (x > 0.0) return x;
  }
  throw Error(ErrorKind::DegenerateDistribution,
              std::string("sample_params: ") + what + " rejected " +
                  std::to_string(kMaxAttempts) + " consecutive non-positive draws");
}

}  // namespace

SampledParams sample_params(const ActuatorParams& nominal, Sigmas sigmas, Rng& rng,
                            std::uint64_t seed_tag) {
  require(sigmas.zeta >= 0.0 && sigmas.omega_n >= 0.0, ErrorKind::InvalidArgument,
          "sample_params: sigmas must be >= 0");
  const double zeta = positive_gaussian(nominal.zeta_fwd, sigmas.zeta, rng, "zeta");
  const double omega = positive_gaussian(nominal.omega_n, sigmas.omega_n, rng, "omega_n");
  return {zeta, omega, seed_tag};
}

SampledParams sample_params(const ActuatorParams& nominal, Sigmas sigmas,
                            std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_params(nominal, sigmas, rng, seed);
}

ActuatorParams apply_sample(const ActuatorParams& nominal, const SampledParams& sample) {
  ActuatorParams p = nominal;
  p.zeta_bwd = sample.zeta_sample + (nominal.zeta_bwd - nominal.zeta_fwd);
  p.zeta_fwd = sample.zeta_sample;
  p.omega_n = sample.omega_n_sample;
  return p;
}

SettledRun drive_to_settle(const ActuatorParams& params, const PumpParams& pump,
                           double speed, double p_target, double dt,
                           const SettleCriterion& settle) {
  require(dt > 0.0, ErrorKind::InvalidArgument, "drive_to_settle: dt must be > 0");
  const auto quiet_needed = std::max<long long>(1, std::llround(settle.window / dt));
  const auto horizon_steps = std::llround(settle.horizon / dt);

  ActuatorState act;
  PumpState ps{0.0, p_target};
  bool pumping = p_target > 0.0;
  long long quiet = 0;
  for (long long step = 1; step <= horizon_steps; ++step) {
    const PumpState next = pumping ? pump_step(pump, ps, speed, dt) : ps;
    act = actuator_step(act, PressureRamp{ps.pressure, next.pressure}, params, dt);
    const bool moved = next.pressure != ps.pressure;
    ps = next;
    if (pumping && ps.pressure >= p_target) pumping = false;

    if (!moved && !pumping && std::abs(act.theta_dot) < settle.velocity_tol) {
      if (++quiet >= quiet_needed) return {act, static_cast<double>(step) * dt};
    } else {
      quiet = 0;
    }
  }
  throw HorizonError(0, "not settled within " + std::to_string(settle.horizon) + " s");
}

MonteCarloResult monte_carlo_sse(const ActuatorParams& nominal,
                                 const SpeedUncertaintyTable& table, double speed,
                                 double target_theta, std::size_t n_trials,
                                 std::uint64_t seed, const MonteCarloOptions& options) {
  validate(nominal);
  validate(table);
  validate(options.pump);
  require(n_trials >= 2, ErrorKind::InvalidArgument, "monte_carlo_sse: n_trials must be >= 2");
  require(target_theta > 0.0 && target_theta <= nominal.theta_max, ErrorKind::InvalidArgument,
          "monte_carlo_sse: target_theta must lie in (0, theta_max]");
  if (!(speed > 0.0 && speed <= options.pump.omega_max)) {
    throw Error(ErrorKind::CommandRange,
                "monte_carlo_sse: speed must lie in (0, omega_max]");
  }

  const Sigmas sigmas = sigma_for_speed(table, speed);
  // Pressure at which the nominal actuator settles exactly on the target.
  const double p_target =
      target_theta * nominal.omega_n * nominal.omega_n / nominal.pressure_gain;

  std::vector<TrialRecord> trials(n_trials);
  parallel_for(n_trials, options.threads, [&](std::size_t i) {
    const std::uint64_t trial_seed = derive_seed(seed, i);
    const SampledParams sample = sample_params(nominal, sigmas, trial_seed);
    SettledRun run{};
    try {
      run = drive_to_settle(apply_sample(nominal, sample), options.pump, speed, p_target,
                            options.dt, options.settle);
    } catch (const HorizonError& e) {
      throw HorizonError(i, "trial " + std::to_string(i) + ": " + e.what());
    }
    trials[i] = {i, trial_seed, sample.zeta_sample, sample.omega_n_sample,
                 run.state.theta - target_theta};
  });

  double sum = 0.0;
  for (const auto& t : trials) sum += t.e_ss;
  const double mean = sum / static_cast<double>(n_trials);
  double ss = 0.0;
  for (const auto& t : trials) ss += (t.e_ss - mean) * (t.e_ss - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n_trials - 1));

  return {{mean, sd, n_trials, speed, target_theta}, std::move(trials)};
}

}  // namespace softtwin
