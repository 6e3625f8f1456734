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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "softtwin/gripper.hpp"
#include "softtwin/qlearn.hpp"
#include "softtwin/uncertainty.hpp"

namespace softtwin {

/// Header `t,p,theta_1..theta_n,theta_dot_1..theta_dot_n,event`, one row per
/// sample, numbers with 9 significant digits.
std::string format_trace_csv(const MultiTrace& trace);
void write_trace(const MultiTrace& trace, const std::filesystem::path& path);

/// Inverse of format_trace_csv; the settle marker is recovered from the
/// event column. Parameters and the reference are not part of the schema.
MultiTrace parse_trace_csv(std::string_view text);
MultiTrace read_trace(const std::filesystem::path& path);

std::string format_trials_csv(const std::vector<TrialRecord>& trials);
std::string format_train_log_csv(const TrainLog& log);
std::string format_policy_csv(const TrainLog& log, const SpeedActionSet& actions);
std::string format_qtable_csv(const QTable& q);

void write_text(const std::filesystem::path& path, std::string_view content);

/// "5pi/3" style label for multiples of pi/12, otherwise the number.
std::string speed_label(double speed);

/// Structured text summary; absent values print as `null`.
struct Summary {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_trials;
  std::optional<double> mean_e_ss;
  std::optional<double> std_e_ss;
  std::optional<double> max_transient_diff_deg;
  std::optional<double> steady_diff_deg;
  // Per state: recommended speed, or nullopt when the state was never visited.
  std::optional<std::vector<std::optional<double>>> greedy_policy;
};

std::string format_summary(const Summary& summary);

}  // namespace softtwin
