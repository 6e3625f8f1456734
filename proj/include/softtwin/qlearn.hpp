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
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "softtwin/gripper.hpp"
#include "softtwin/random.hpp"
#include "softtwin/uncertainty.hpp"

namespace softtwin {

/// The six motor-speed actions, strictly increasing, rad/s.
struct SpeedActionSet {
  std::array<double, 6> speeds = defaults();

  static std::array<double, 6> defaults();
  static constexpr int size() noexcept { return 6; }
};

void validate(const SpeedActionSet& actions);

/// Tabular action values, states x actions, zero-initialized.
struct QTable {
  Eigen::MatrixXd values;
  double alpha = 0.1;
  double gamma = 0.95;

  QTable(int states, int actions, double alpha = 0.1, double gamma = 0.95);

  int states() const noexcept { return static_cast<int>(values.rows()); }
  int actions() const noexcept { return static_cast<int>(values.cols()); }
};

/// Default edges separating observed sigma(e_ss) into six bins:
/// [0, .06), [.06, .07), [.07, .08), [.08, .09), [.09, .11), [.11, inf).
std::vector<double> default_bin_edges();

int uncertainty_bin(double sigma_hat, const std::vector<double>& edges);

double reward(double sigma_e_ss);

/// Watkins update: Q(s,a) += alpha (r + gamma max_a' Q(s',a') - Q(s,a)).
void q_update(QTable& q, int s, int a, double r, int s_next);

/// argmax over Q(s, .), ties broken by the lowest index.
int greedy_action(const QTable& q, int s);

/// Epsilon-greedy. Always consumes one uniform draw, plus one more when it
/// explores.
int select_action(const QTable& q, int s, double epsilon, Rng& rng);

struct EnvConfig {
  GripperSystem gripper = default_gripper();
  SpeedUncertaintyTable table = SpeedUncertaintyTable::defaults();
  SpeedActionSet actions{};
  std::vector<double> bin_edges = default_bin_edges();
  double target_theta = 1.0;
  std::size_t trials_per_step = 50;
  std::size_t steps_per_episode = 20;
  double dt = 1e-3;
  SettleCriterion settle{};
  unsigned threads = 1;
};

struct EnvStep {
  int observation;
  double reward;
  bool done;
  double sigma_hat;                  // max over fingers
  std::vector<double> finger_sigma;  // std(e_ss) per finger
  Sigmas sampling;                   // parameter spread used for the speed
  double speed;
};

/// The gripper as a discrete MDP: observation = uncertainty bin, action =
/// speed index, reward = -max_i std(e_ss_i) over a Monte Carlo batch.
/// The k-th step after a (re)seed draws its batch from derive_seed(seed,
/// {k, finger}); the stream is owned by the environment, not the agent.
class GripperEnv {
 public:
  GripperEnv(EnvConfig config, std::uint64_t seed);

  /// Starts an episode in the "nothing observed yet" bin. With a seed the
  /// stream restarts from that seed.
  int reset(std::optional<std::uint64_t> seed = std::nullopt);

  EnvStep step(int action);

  const EnvConfig& config() const noexcept { return config_; }
  int state_count() const noexcept { return static_cast<int>(config_.bin_edges.size()) + 1; }
  int action_count() const noexcept { return SpeedActionSet::size(); }

 private:
  EnvConfig config_;
  std::uint64_t seed_;
  std::uint64_t step_counter_ = 0;
  std::size_t episode_step_ = 0;
};

inline EnvStep env_step(GripperEnv& env, int action) { return env.step(action); }

struct TrainHyper {
  double alpha = 0.1;
  double gamma = 0.95;
  double epsilon0 = 0.2;
  double epsilon_decay = 0.9;
};

struct Transition {
  int state;
  int action;
  double reward;
  int next_state;
};

struct EpisodeRecord {
  double epsilon;
  std::vector<Transition> steps;
  std::vector<int> greedy_policy;  // snapshot after the episode
  double cumulative_reward = 0.0;
};

struct TrainLog {
  std::vector<EpisodeRecord> episodes;

  /// States in which an action was taken, ascending.
  std::vector<int> visited_states() const;
};

struct TrainResult {
  QTable q;
  TrainLog log;
  std::vector<int> greedy_policy;  // per state
};

/// Epsilon-greedy Q-learning; epsilon decays geometrically per episode.
/// `agent_seed` drives exploration only.
TrainResult train(GripperEnv& env, std::size_t episodes, const TrainHyper& hyper,
                  std::uint64_t agent_seed);

}  // namespace softtwin
