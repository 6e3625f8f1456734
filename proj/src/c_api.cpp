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

#include "softtwin/c_api.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include "softtwin/config.hpp"
#include "softtwin/error.hpp"
#include "softtwin/qlearn.hpp"
#include "softtwin/random.hpp"

struct softtwin_env {
  std::unique_ptr<softtwin::GripperEnv> env;
  bool closed = false;
  std::string last_error;
};

namespace {

int status_of(softtwin::ErrorKind kind) {
  using softtwin::ErrorKind;
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Index:
    case ErrorKind::CommandRange:
      return SOFTTWIN_E_ARGUMENT;
    case ErrorKind::Lifecycle:
      return SOFTTWIN_E_LIFECYCLE;
    case ErrorKind::Configuration:
    case ErrorKind::Parse:
    case ErrorKind::InvalidParameter:
    case ErrorKind::Io:
      return SOFTTWIN_E_CONFIG;
    default:
      return SOFTTWIN_E_SIMULATION;
  }
}

template <typename Fn>
int guarded(softtwin_env* env, Fn&& fn) {
  if (env == nullptr) return SOFTTWIN_E_ARGUMENT;
  env->last_error.clear();
  if (env->closed) {
    env->last_error = "environment is closed";
    return SOFTTWIN_E_LIFECYCLE;
  }
  try {
    fn();
    return SOFTTWIN_OK;
  } catch (const softtwin::Error& e) {
    env->last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    env->last_error = e.what();
    return SOFTTWIN_E_INTERNAL;
  }
}

}  // namespace

extern "C" {

softtwin_env* softtwin_env_create(const char* config_path, uint64_t seed, char* err,
                                  size_t err_len) {
  try {
    const softtwin::TwinConfig cfg =
        config_path ? softtwin::load_config(config_path) : softtwin::TwinConfig{};
    auto handle = std::make_unique<softtwin_env>();
    handle->env =
        std::make_unique<softtwin::GripperEnv>(softtwin::make_env_config(cfg), seed);
    return handle.release();
  } catch (const std::exception& e) {
    if (err != nullptr && err_len > 0) {
      std::strncpy(err, e.what(), err_len - 1);
      err[err_len - 1] = '\0';
    }
    return nullptr;
  }
}

int softtwin_env_reset(softtwin_env* env, int has_seed, uint64_t seed, int* observation) {
  return guarded(env, [&] {
    const int obs = env->env->reset(has_seed ? std::optional<std::uint64_t>(seed) : std::nullopt);
    if (observation != nullptr) *observation = obs;
  });
}

int softtwin_env_step(softtwin_env* env, int action, softtwin_step_info* info) {
  return guarded(env, [&] {
    const softtwin::EnvStep s = env->env->step(action);
    if (info != nullptr) {
      info->observation = s.observation;
      info->reward = s.reward;
      info->done = s.done ? 1 : 0;
      info->sigma_hat = s.sigma_hat;
      info->sigma_zeta = s.sampling.zeta;
      info->sigma_omega_n = s.sampling.omega_n;
      info->speed = s.speed;
    }
  });
}

int softtwin_env_state_count(const softtwin_env* env) {
  return env && !env->closed ? env->env->state_count() : -1;
}

int softtwin_env_action_count(const softtwin_env* env) {
  return env && !env->closed ? env->env->action_count() : -1;
}

double softtwin_env_action_speed(const softtwin_env* env, int action) {
  if (env == nullptr || env->closed || action < 0 || action >= env->env->action_count()) {
    return std::nan("");
  }
  return env->env->config().actions.speeds[static_cast<std::size_t>(action)];
}

int softtwin_env_close(softtwin_env* env) {
  return guarded(env, [&] { env->closed = true; });
}

void softtwin_env_destroy(softtwin_env* env) { delete env; }

const char* softtwin_env_last_error(const softtwin_env* env) {
  return env ? env->last_error.c_str() : "null environment";
}

uint64_t softtwin_env_seed_for(uint64_t master_seed) {
  return softtwin::derive_seed(master_seed, 1);
}

uint64_t softtwin_agent_seed_for(uint64_t master_seed) {
  return softtwin::derive_seed(master_seed, 2);
}

}  // extern "C"
