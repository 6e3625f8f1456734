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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "softtwin/error.hpp"
#include "softtwin/qlearn.hpp"

using namespace softtwin;

namespace {

constexpr double kPi = std::numbers::pi;

EnvConfig small_env(unsigned threads = 1) {
  EnvConfig c;
  c.trials_per_step = 6;
  c.steps_per_episode = 3;
  c.threads = threads;
  return c;
}

}  // namespace

TEST_CASE("speed actions") {
  const SpeedActionSet a;
  for (int k = 0; k < 6; ++k) CHECK(a.speeds[k] == doctest::Approx((k + 1) * kPi / 3.0).epsilon(1e-15));
  CHECK_NOTHROW(validate(a));
  SpeedActionSet bad;
  bad.speeds[3] = bad.speeds[2];
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("QTable starts at zero") {
  const QTable q(6, 6);
  CHECK(q.values.isZero(0.0));
  CHECK(q.alpha == 0.1);
  CHECK(q.gamma == 0.95);
  CHECK_THROWS_AS(QTable(0, 6), Error);
  CHECK_THROWS_AS(QTable(6, 6, 0.0), Error);
  CHECK_THROWS_AS(QTable(6, 6, 0.1, 1.0), Error);
}

TEST_CASE("uncertainty_bin") {
  const auto edges = default_bin_edges();
  CHECK(uncertainty_bin(0.0, edges) == 0);
  CHECK(uncertainty_bin(0.059, edges) == 0);
  CHECK(uncertainty_bin(0.06, edges) == 1);
  CHECK(uncertainty_bin(0.075, edges) == 2);
  CHECK(uncertainty_bin(0.085, edges) == 3);
  CHECK(uncertainty_bin(0.1, edges) == 4);
  CHECK(uncertainty_bin(0.11, edges) == 5);
  CHECK(uncertainty_bin(3.0, edges) == 5);
  CHECK_THROWS_AS(uncertainty_bin(-0.01, edges), Error);
}

TEST_CASE("reward") {
  CHECK(reward(0.0) == 0.0);
  CHECK(reward(0.05) == -0.05);
  CHECK_THROWS_AS(reward(-1.0), Error);
}

TEST_CASE("q_update: one step from zero") {
  QTable q(6, 6);
  q_update(q, 0, 5, -0.05, 0);
  CHECK(q.values(0, 5) == doctest::Approx(-0.005).epsilon(1e-12));
  CHECK(q.values.cwiseAbs().sum() == doctest::Approx(0.005).epsilon(1e-12));
  try {
    q_update(q, 6, 0, -0.05, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Index);
  }
  CHECK_THROWS_AS(q_update(q, 0, 6, -0.05, 0), Error);
  CHECK_THROWS_AS(q_update(q, 0, 0, -0.05, -1), Error);
}

TEST_CASE("q_update: self-loop converges to the discounted fixed point") {
  for (const double r : {-0.05, -0.11, 0.3}) {
    QTable q(1, 1);
    for (int i = 0; i < 10000; ++i) q_update(q, 0, 0, r, 0);
    CHECK(std::abs(q.values(0, 0) - oracle::discounted_fixed_point(r, 0.95)) < 1e-6);
  }
}

TEST_CASE("q_update: values stay within the reward bounds") {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> idx(0, 5);
  std::uniform_real_distribution<double> sigma(0.04, 0.15);
  QTable q(6, 6);
  const double lo = -0.15 / (1.0 - q.gamma);
  for (int i = 0; i < 50000; ++i) {
    q_update(q, idx(gen), idx(gen), reward(sigma(gen)), idx(gen));
    REQUIRE(q.values.minCoeff() >= lo);
    REQUIRE(q.values.maxCoeff() <= 0.0);
  }
}

TEST_CASE("q_update: positive reward scaling keeps the greedy policy") {
  std::mt19937_64 gen(21);
  std::uniform_int_distribution<int> idx(0, 5);
  std::uniform_real_distribution<double> sigma(0.04, 0.15);
  QTable a(6, 6), b(6, 6);
  const double c = 7.5;
  for (int i = 0; i < 5000; ++i) {
    const int s = idx(gen), act = idx(gen), s2 = idx(gen);
    const double r = reward(sigma(gen));
    q_update(a, s, act, r, s2);
    q_update(b, s, act, c * r, s2);
  }
  CHECK((b.values - c * a.values).cwiseAbs().maxCoeff() < 1e-12);
  for (int s = 0; s < 6; ++s) CHECK(greedy_action(a, s) == greedy_action(b, s));
}

TEST_CASE("greedy_action breaks ties toward the lowest index") {
  QTable q(2, 6);
  CHECK(greedy_action(q, 0) == 0);
  q.values(1, 2) = -0.1;
  q.values(1, 0) = -0.2;
  CHECK(greedy_action(q, 1) == 1);
  q.values(1, 4) = 0.5;
  q.values(1, 5) = 0.5;
  CHECK(greedy_action(q, 1) == 4);
}

TEST_CASE("select_action") {
  QTable q(1, 6);
  q.values(0, 3) = 1.0;
  Rng rng = make_rng(4);
  for (int i = 0; i < 1000; ++i) CHECK(select_action(q, 0, 0.0, rng) == 3);

  std::vector<int> counts(6, 0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(select_action(q, 0, 1.0, rng))];
  const double p = 1.0 / 6.0;
  const double se = std::sqrt(n * p * (1.0 - p));
  for (int c : counts) CHECK(std::abs(c - n * p) < 4.0 * se);

  Rng a = make_rng(9), b = make_rng(9);
  for (int i = 0; i < 200; ++i) CHECK(select_action(q, 0, 0.3, a) == select_action(q, 0, 0.3, b));
  CHECK_THROWS_AS(select_action(q, 0, 1.5, a), Error);
}

TEST_CASE("GripperEnv: episode structure and errors") {
  GripperEnv env(small_env(), 17);
  CHECK(env.state_count() == 6);
  CHECK(env.action_count() == 6);
  CHECK(env.reset() == 0);
  EnvStep s = env.step(5);
  CHECK_FALSE(s.done);
  CHECK(s.finger_sigma.size() == 2);
  CHECK(s.sigma_hat == std::max(s.finger_sigma[0], s.finger_sigma[1]));
  CHECK(s.reward == -s.sigma_hat);
  CHECK(s.observation == uncertainty_bin(s.sigma_hat, default_bin_edges()));
  CHECK(s.speed == doctest::Approx(2.0 * kPi));
  CHECK(s.sampling.zeta == 0.05);
  CHECK_FALSE(env.step(0).done);
  CHECK(env.step(0).done);
  try {
    env.step(9);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
  }
  CHECK_THROWS_AS(env.step(-1), Error);

  EnvConfig bad = small_env();
  bad.trials_per_step = 1;
  CHECK_THROWS_AS(GripperEnv(bad, 0), Error);
}

TEST_CASE("GripperEnv: reseeding replays the stream") {
  GripperEnv env(small_env(), 17);
  env.reset();
  const EnvStep a1 = env.step(2);
  const EnvStep a2 = env.step(4);
  env.reset(17);
  const EnvStep b1 = env.step(2);
  const EnvStep b2 = env.step(4);
  CHECK(a1.sigma_hat == b1.sigma_hat);
  CHECK(a2.sigma_hat == b2.sigma_hat);
  env.reset();
  CHECK(env.step(2).sigma_hat != a1.sigma_hat);

  GripperEnv threaded(small_env(4), 17);
  threaded.reset();
  CHECK(threaded.step(2).sigma_hat == a1.sigma_hat);
}

TEST_CASE("train: log structure and replay") {
  GripperEnv env_a(small_env(), derive_seed(5, 1));
  GripperEnv env_b(small_env(4), derive_seed(5, 1));
  const TrainResult a = train(env_a, 4, TrainHyper{}, derive_seed(5, 2));
  const TrainResult b = train(env_b, 4, TrainHyper{}, derive_seed(5, 2));
  REQUIRE(a.log.episodes.size() == 4);
  CHECK(a.q.values == b.q.values);
  CHECK(a.greedy_policy == b.greedy_policy);
  double eps = 0.2;
  for (const auto& ep : a.log.episodes) {
    CHECK(ep.epsilon == doctest::Approx(eps));
    eps *= 0.9;
    REQUIRE(ep.steps.size() == 3);
    CHECK(ep.steps.front().state == 0);
    for (std::size_t k = 1; k < ep.steps.size(); ++k) CHECK(ep.steps[k].state == ep.steps[k - 1].next_state);
    double total = 0.0;
    for (const auto& t : ep.steps) total += t.reward;
    CHECK(ep.cumulative_reward == doctest::Approx(total));
    CHECK(ep.greedy_policy.size() == 6);
  }
  CHECK(a.log.episodes.back().greedy_policy == a.greedy_policy);
  const auto visited = a.log.visited_states();
  CHECK(visited.front() == 0);
  CHECK(std::is_sorted(visited.begin(), visited.end()));

  // Replaying the log through q_update reproduces the table.
  QTable q(6, 6);
  for (const auto& ep : a.log.episodes)
    for (const auto& t : ep.steps) q_update(q, t.state, t.action, t.reward, t.next_state);
  CHECK(q.values == a.q.values);

  GripperEnv env_c(small_env(), 0);
  CHECK_THROWS_AS(train(env_c, 0, TrainHyper{}, 0), Error);
}
