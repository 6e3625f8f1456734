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

/* C boundary around the gripper MDP, for foreign-function bindings. */
#ifndef SOFTTWIN_C_API_H_
#define SOFTTWIN_C_API_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct softtwin_env softtwin_env;

enum softtwin_status {
  SOFTTWIN_OK = 0,
  SOFTTWIN_E_ARGUMENT = 1,
  SOFTTWIN_E_LIFECYCLE = 2,
  SOFTTWIN_E_CONFIG = 3,
  SOFTTWIN_E_SIMULATION = 4,
  SOFTTWIN_E_INTERNAL = 5
};

typedef struct softtwin_step_info {
  int observation;
  double reward;
  int done;
  double sigma_hat;
  double sigma_zeta;    /* parameter spread sampled at the chosen speed */
  double sigma_omega_n;
  double speed;
} softtwin_step_info;

/* config_path may be NULL for the built-in defaults. Returns NULL on failure
 * and, when err is non-NULL, copies a message into err. */
softtwin_env* softtwin_env_create(const char* config_path, uint64_t seed, char* err,
                                  size_t err_len);

int softtwin_env_reset(softtwin_env* env, int has_seed, uint64_t seed, int* observation);
int softtwin_env_step(softtwin_env* env, int action, softtwin_step_info* info);
int softtwin_env_state_count(const softtwin_env* env);
int softtwin_env_action_count(const softtwin_env* env);
double softtwin_env_action_speed(const softtwin_env* env, int action);

/* After close every call but destroy fails with SOFTTWIN_E_LIFECYCLE. */
int softtwin_env_close(softtwin_env* env);
void softtwin_env_destroy(softtwin_env* env);

/* Message of the last failed call on env; empty when none. */
const char* softtwin_env_last_error(const softtwin_env* env);

/* Seeds used by the `train` subcommand for a master seed. */
uint64_t softtwin_env_seed_for(uint64_t master_seed);
uint64_t softtwin_agent_seed_for(uint64_t master_seed);

#ifdef __cplusplus
}
#endif

#endif  /* SOFTTWIN_C_API_H_ */
