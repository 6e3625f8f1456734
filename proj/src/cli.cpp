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

#include "softtwin/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "softtwin/config.hpp"
#include "softtwin/error.hpp"
#include "softtwin/gripper.hpp"
#include "softtwin/qlearn.hpp"
#include "softtwin/random.hpp"
#include "softtwin/trace_io.hpp"
#include "softtwin/uncertainty.hpp"

namespace softtwin {

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Configuration:
    case ErrorKind::Parse:
    case ErrorKind::InvalidParameter:
      return 3;
    case ErrorKind::CommandRange:
    case ErrorKind::InvalidArgument:
    case ErrorKind::Index:
    case ErrorKind::NotApplicable:
    case ErrorKind::Lifecycle:
      return 4;
    case ErrorKind::NumericFault:
    case ErrorKind::Horizon:
    case ErrorKind::DegenerateDistribution:
    case ErrorKind::Calibration:
      return 5;
    case ErrorKind::Io:
      return 6;
  }
  return kExitInternal;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> speed;
  std::optional<double> target;
  std::optional<double> hold;
  std::optional<unsigned> threads;
  std::size_t trials = 1000;
  std::optional<std::size_t> episodes;
  std::string uncertainty = "off";
};

TwinConfig resolve_config(const Options& opt) {
  TwinConfig cfg;
  if (!opt.config_path.empty()) {
    cfg = load_config(opt.config_path);
  } else if (const char* env = std::getenv(kConfigEnvVar); env && *env) {
    cfg = load_config(env);
  }
  if (opt.threads) cfg.threads = *opt.threads;
  if (opt.target) cfg.target_theta = *opt.target;
  if (opt.hold) cfg.hold_duration = *opt.hold;
  if (opt.episodes) cfg.qlearn.episodes = *opt.episodes;
  validate(cfg);
  return cfg;
}

std::uint64_t require_seed(const Options& opt, const char* scenario) {
  if (!opt.seed) {
    throw UsageError(std::string(scenario) + ": --seed is required for stochastic runs");
  }
  return *opt.seed;
}

class Outputs {
 public:
  Outputs(const Options& opt, const TwinConfig& cfg, std::string scenario,
          std::vector<std::string> argv)
      : dir_(opt.out_dir) {
    manifest_.config_hash = config_hash(cfg);
    manifest_.seed = opt.seed.value_or(0);
    manifest_.tool_version = SOFTTWIN_VERSION;
    manifest_.scenario = std::move(scenario);
    manifest_.started_utc = utc_timestamp();
    manifest_.argv = std::move(argv);
    manifest_.config = serialize_config(cfg);
    if (!dir_.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(dir_, ec);
      if (ec) throw Error(ErrorKind::Io, "cannot create " + dir_.string() + ": " + ec.message());
    }
  }

  void file(const std::string& name, const std::string& content) {
    if (!dir_.empty()) write_text(dir_ / name, content);
  }

  void finish(std::ostream& out, const Summary& summary) {
    const std::string text = format_summary(summary);
    out << text;
    if (dir_.empty()) return;
    write_text(dir_ / "summary.txt", text);
    manifest_.finished_utc = utc_timestamp();
    write_text(dir_ / "manifest.json", to_json(manifest_));
  }

 private:
  std::filesystem::path dir_;
  RunManifest manifest_;
};

int run_simulate(const Options& opt, const std::vector<std::string>& argv, std::ostream& out) {
  const TwinConfig cfg = resolve_config(opt);
  const bool uncertain = opt.uncertainty == "on";
  GripperSystem single = make_gripper(cfg);
  single.fingers.resize(1);
  calibrate_gains(single, cfg.target_theta);

  GraspOptions go;
  go.dt = cfg.dt;
  go.settle = cfg.settle;
  go.table = cfg.uncertainty;
  go.uncertainty = uncertain;
  go.seed = uncertain ? require_seed(opt, "simulate") : opt.seed.value_or(0);
  const GraspCommand cmd{opt.speed.value_or(cfg.pump.omega_max), cfg.target_theta,
                         cfg.hold_duration};

  Outputs io(opt, cfg, "simulate", argv);
  const MultiTrace trace = simulate_grasp(single, cmd, go);
  io.file("trace.csv", format_trace_csv(trace));
  Summary s;
  s.scenario = "simulate";
  s.seed = opt.seed;
  s.n_trials = 1;
  s.mean_e_ss = trace.theta(trace.rows() - 1, 0) - cfg.target_theta;
  io.finish(out, s);
  return 0;
}

int run_montecarlo(const Options& opt, const std::vector<std::string>& argv, std::ostream& out) {
  const std::uint64_t seed = require_seed(opt, "montecarlo");
  const TwinConfig cfg = resolve_config(opt);
  GripperSystem single = make_gripper(cfg);
  single.fingers.resize(1);
  calibrate_gains(single, cfg.target_theta);

  MonteCarloOptions mc;
  mc.pump = cfg.pump;
  mc.dt = cfg.dt;
  mc.settle = cfg.settle;
  mc.threads = cfg.threads;

  Outputs io(opt, cfg, "montecarlo", argv);
  const auto result = monte_carlo_sse(single.fingers[0], cfg.uncertainty,
                                      opt.speed.value_or(cfg.pump.omega_max), cfg.target_theta,
                                      opt.trials, seed, mc);
  io.file("trials.csv", format_trials_csv(result.trials));
  Summary s;
  s.scenario = "montecarlo";
  s.seed = seed;
  s.n_trials = result.stats.n_trials;
  s.mean_e_ss = result.stats.mean_e_ss;
  s.std_e_ss = result.stats.std_e_ss;
  io.finish(out, s);
  return 0;
}

int run_train(const Options& opt, const std::vector<std::string>& argv, std::ostream& out) {
  const std::uint64_t seed = require_seed(opt, "train");
  const TwinConfig cfg = resolve_config(opt);
  GripperEnv env(make_env_config(cfg), derive_seed(seed, 1));
  const TrainHyper hyper{cfg.qlearn.alpha, cfg.qlearn.gamma, cfg.qlearn.epsilon0,
                         cfg.qlearn.epsilon_decay};

  Outputs io(opt, cfg, "train", argv);
  const TrainResult result = train(env, cfg.qlearn.episodes, hyper, derive_seed(seed, 2));
  const SpeedActionSet& actions = env.config().actions;
  io.file("trainlog.csv", format_train_log_csv(result.log));
  io.file("policy.csv", format_policy_csv(result.log, actions));
  io.file("qtable.csv", format_qtable_csv(result.q));

  std::vector<std::optional<double>> policy(result.greedy_policy.size());
  for (const int s : result.log.visited_states()) {
    policy[static_cast<std::size_t>(s)] =
        actions.speeds[static_cast<std::size_t>(result.greedy_policy[static_cast<std::size_t>(s)])];
  }
  Summary s;
  s.scenario = "train";
  s.seed = seed;
  s.n_trials = cfg.qlearn.trials_per_step;
  s.greedy_policy = std::move(policy);
  io.finish(out, s);
  return 0;
}

int run_coordinate(const Options& opt, const std::vector<std::string>& argv, std::ostream& out) {
  const TwinConfig cfg = resolve_config(opt);
  const bool uncertain = opt.uncertainty == "on";
  GripperSystem gripper = make_gripper(cfg);
  calibrate_gains(gripper, cfg.target_theta);

  GraspOptions go;
  go.dt = cfg.dt;
  go.settle = cfg.settle;
  go.table = cfg.uncertainty;
  go.uncertainty = uncertain;
  go.seed = uncertain ? require_seed(opt, "coordinate") : opt.seed.value_or(0);
  const GraspCommand cmd{opt.speed.value_or(cfg.pump.omega_max), cfg.target_theta,
                         cfg.hold_duration};

  Outputs io(opt, cfg, "coordinate", argv);
  const MultiTrace trace = simulate_grasp(gripper, cmd, go);
  const CoordinationError ce = coordination_error(trace);
  io.file("trace.csv", format_trace_csv(trace));
  Summary s;
  s.scenario = "coordinate";
  s.seed = opt.seed;
  s.max_transient_diff_deg = ce.max_transient_diff_deg;
  s.steady_diff_deg = ce.steady_diff_deg;
  io.finish(out, s);
  return 0;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Digital twin of an underactuated pneumatic soft gripper", "softtwin"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SOFTTWIN_VERSION);
  Options opt;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path,
                    std::string("JSON config (default: $") + kConfigEnvVar + " or built-in)");
    sub->add_option("--out", opt.out_dir, "Output directory");
    sub->add_option("--seed", opt.seed, "Master seed");
    sub->add_option("--speed", opt.speed, "Motor speed, rad/s")->check(CLI::PositiveNumber);
    sub->add_option("--target", opt.target, "Target bending angle, rad")
        ->check(CLI::PositiveNumber);
    sub->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
  };
  const auto hold_and_uncertainty = [&](CLI::App* sub) {
    sub->add_option("--hold", opt.hold, "Hold after the pump stops, s")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--uncertainty", opt.uncertainty, "Sample finger parameters")
        ->check(CLI::IsMember({"on", "off"}));
  };

  auto* simulate = app.add_subcommand("simulate", "Single-actuator grasp trace");
  common(simulate);
  hold_and_uncertainty(simulate);
  auto* montecarlo = app.add_subcommand("montecarlo", "Steady-state error spread at one speed");
  common(montecarlo);
  montecarlo->add_option("--trials", opt.trials, "Monte Carlo trials")
      ->check(CLI::Range(std::size_t{2}, std::size_t{10000000}));
  auto* trainer = app.add_subcommand("train", "Q-learning over the six motor speeds");
  common(trainer);
  trainer->add_option("--episodes", opt.episodes, "Training episodes")
      ->check(CLI::PositiveNumber);
  auto* coordinate = app.add_subcommand("coordinate", "Two-finger coordination under one input");
  common(coordinate);
  hold_and_uncertainty(coordinate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error[usage]: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const std::vector<std::string> args(argv, argv + argc);
  try {
    if (*simulate) return run_simulate(opt, args, out);
    if (*montecarlo) return run_montecarlo(opt, args, out);
    if (*trainer) return run_train(opt, args, out);
    if (*coordinate) return run_coordinate(opt, args, out);
  } catch (const UsageError& e) {
    err << "error[usage]: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error[" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace softtwin
