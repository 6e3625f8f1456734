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

#include "softtwin/qlearn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "softtwin/error.hpp"

namespace softtwin {

std::array<double, 6> SpeedActionSet::defaults() {
  constexpr double step = std::numbers::pi / 3.0;
  return {step, 2.0 * step, 3.0 * step, 4.0 * step, 5.0 * step, 6.0 * step};
}

void validate(const SpeedActionSet& actions) {
  for (std::size_t i = 0; i < actions.speeds.size(); ++i) {
    require(std::isfinite(actions.speeds[i]) && actions.speeds[i] > 0.0,
            ErrorKind::Configuration, "actions: speeds must be > 0");
    if (i > 0) {
      require(actions.speeds[i] > actions.speeds[i - 1], ErrorKind::Configuration,
              "actions: speeds must be strictly increasing");
    }
  }
}

QTable::QTable(int states, int actions, double alpha_, double gamma_)
    : values(Eigen::MatrixXd::Zero(states, actions)), alpha(alpha_), gamma(gamma_) {
  require(states > 0 && actions > 0, ErrorKind::InvalidArgument,
          "QTable: dimensions must be positive");
  require(alpha > 0.0 && alpha <= 1.0, ErrorKind::InvalidArgument,
          "QTable: alpha must lie in (0, 1]");
  require(gamma >= 0.0 && gamma < 1.0, ErrorKind::InvalidArgument,
          "QTable: gamma must lie in [0, 1)");
}

std::vector<double> default_bin_edges() { return {0.06, 0.07, 0.08, 0.09, 0.11}; }

int uncertainty_bin(double sigma_hat, const std::vector<double>& edges) {
  require(sigma_hat >= 0.0, ErrorKind::InvalidArgument, "uncertainty_bin: sigma must be >= 0");
  return static_cast<int>(std::upper_bound(edges.begin(), edges.end(), sigma_hat) -
                          edges.begin());
}

double reward(double sigma_e_ss) {
  require(sigma_e_ss >= 0.0, ErrorKind::InvalidArgument, "reward: sigma must be >= 0");
  return -sigma_e_ss;
}

namespace {

void check_index(const QTable& q, int s, int a) {
  if (s < 0 || s >= q.states() || a < 0 || a >= q.actions()) {
    throw Error(ErrorKind::Index, "Q index (" + std::to_string(s) + ", " + std::to_string(a) +
                                      ") outside " + std::to_string(q.states()) + "x" +
                                      std::to_string(q.actions()));
  }
}

}  // namespace

void q_update(QTable& q, int s, int a, double r, int s_next) {
  check_index(q, s, a);
  check_index(q, s_next, 0);
  const double target = r + q.gamma * q.values.row(s_next).maxCoeff();
  q.values(s, a) += q.alpha * (target - q.values(s, a));
}

int greedy_action(const QTable& q, int s) {
  check_index(q, s, 0);
  int best = 0;
  for (int a = 1; a < q.actions(); ++a) {
    if (q.values(s, a) > q.values(s, best)) best = a;
  }
  return best;
}

int select_action(const QTable& q, int s, double epsilon, Rng& rng) {
  require(epsilon >= 0.0 && epsilon <= 1.0, ErrorKind::InvalidArgument,
          "select_action: epsilon must lie in [0, 1]");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < epsilon) {
    std::uniform_int_distribution<int> pick(0, q.actions() - 1);
    return pick(rng);
  }
  return greedy_action(q, s);
}

GripperEnv::GripperEnv(EnvConfig config, std::uint64_t seed)
    : config_(std::move(config)), seed_(seed) {
  validate(config_.actions);
  validate(config_.table);
  require(std::is_sorted(config_.bin_edges.begin(), config_.bin_edges.end()),
          ErrorKind::Configuration, "bin_edges must be sorted");
  require(config_.trials_per_step >= 2, ErrorKind::Configuration,
          "trials_per_step must be >= 2");
  require(config_.steps_per_episode >= 1, ErrorKind::Configuration,
          "steps_per_episode must be >= 1");
  calibrate_gains(config_.gripper, config_.target_theta);
}

int GripperEnv::reset(std::optional<std::uint64_t> seed) {
  if (seed) {
    seed_ = *seed;
    step_counter_ = 0;
  }
  episode_step_ = 0;
  return uncertainty_bin(0.0, config_.bin_edges);
}

EnvStep GripperEnv::step(int action) {
  if (action < 0 || action >= action_count()) {
    throw Error(ErrorKind::InvalidArgument,
                "env step: action " + std::to_string(action) + " outside [0, " +
                    std::to_string(action_count() - 1) + "]");
  }
  const double speed = config_.actions.speeds[static_cast<std::size_t>(action)];
  MonteCarloOptions mc;
  mc.pump = config_.gripper.pump;
  mc.dt = config_.dt;
  mc.settle = config_.settle;
  mc.threads = config_.threads;

  EnvStep out{};
  out.speed = speed;
  out.sampling = sigma_for_speed(config_.table, speed);
  out.sigma_hat = 0.0;
  for (std::size_t f = 0; f < config_.gripper.size(); ++f) {
    const auto result =
        monte_carlo_sse(config_.gripper.fingers[f], config_.table, speed, config_.target_theta,
                        config_.trials_per_step, derive_seed(seed_, {step_counter_, f}), mc);
    out.finger_sigma.push_back(result.stats.std_e_ss);
    out.sigma_hat = std::max(out.sigma_hat, result.stats.std_e_ss);
  }
  ++step_counter_;
  ++episode_step_;
  out.reward = reward(out.sigma_hat);
  out.observation = uncertainty_bin(out.sigma_hat, config_.bin_edges);
  out.done = episode_step_ >= config_.steps_per_episode;
  return out;
}

std::vector<int> TrainLog::visited_states() const {
  std::set<int> seen;
  for (const auto& ep : episodes) {
    for (const auto& t : ep.steps) seen.insert(t.state);
  }
  return {seen.begin(), seen.end()};
}

namespace {

std::vector<int> greedy_policy(const QTable& q) {
  std::vector<int> policy(static_cast<std::size_t>(q.states()));
  for (int s = 0; s < q.states(); ++s) policy[static_cast<std::size_t>(s)] = greedy_action(q, s);
  return policy;
}

}  // namespace

TrainResult train(GripperEnv& env, std::size_t episodes, const TrainHyper& hyper,
                  std::uint64_t agent_seed) {
  require(episodes >= 1, ErrorKind::InvalidArgument, "train: episodes must be >= 1");
  require(hyper.epsilon0 >= 0.0 && hyper.epsilon0 <= 1.0, ErrorKind::InvalidArgument,
          "train: epsilon0 must lie in [0, 1]");
  require(hyper.epsilon_decay >= 0.0 && hyper.epsilon_decay <= 1.0, ErrorKind::InvalidArgument,
          "train: epsilon_decay must lie in [0, 1]");

  TrainResult result{QTable(env.state_count(), env.action_count(), hyper.alpha, hyper.gamma),
                     {}, {}};
  Rng rng = make_rng(agent_seed);
  double epsilon = hyper.epsilon0;
  for (std::size_t e = 0; e < episodes; ++e) {
    EpisodeRecord record{epsilon, {}, {}, 0.0};
    int s = env.reset();
    for (;;) {
      const int a = select_action(result.q, s, epsilon, rng);
      const EnvStep step = env.step(a);
      q_update(result.q, s, a, step.reward, step.observation);
      record.steps.push_back({s, a, step.reward, step.observation});
      record.cumulative_reward += step.reward;
      s = step.observation;
      if (step.done) break;
    }
    record.greedy_policy = greedy_policy(result.q);
    result.log.episodes.push_back(std::move(record));
    epsilon *= hyper.epsilon_decay;
  }
  result.greedy_policy = greedy_policy(result.q);
  return result;
}

}  // namespace softtwin
