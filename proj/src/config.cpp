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

#include "softtwin/config.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "softtwin/error.hpp"

namespace softtwin {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::Configuration, path + ": " + what);
}

/// Reads the known keys of one JSON object and rejects the rest.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) config_error(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) config_error(child(key), "expected a number");
      out = v->get<double>();
    }
  }

  template <typename Unsigned>
  void count(const std::string& key, Unsigned& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) config_error(child(key), "expected a non-negative integer");
      out = v->get<Unsigned>();
    }
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) config_error(child(key), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_finger(const json& j, const std::string& path, ActuatorParams& f) {
  ObjectReader r(j, path);
  r.number("zeta_fwd", f.zeta_fwd);
  r.number("zeta_bwd", f.zeta_bwd);
  r.number("omega_n", f.omega_n);
  r.number("m_eq", f.m_eq);
  r.number("pressure_gain", f.pressure_gain);
  r.number("theta_max", f.theta_max);
  if (const json* s = r.find("softening")) {
    ObjectReader rs(*s, r.child("softening"));
    rs.number("k_inf_ratio", f.softening.k_inf_ratio);
    rs.number("lambda", f.softening.lambda);
    rs.finish();
  }
  r.finish();
}

void read_config(const json& root, TwinConfig& c) {
  ObjectReader r(root, "");
  r.count("seed", c.seed);
  r.number("dt", c.dt);
  r.number("target_theta", c.target_theta);
  r.number("hold_duration", c.hold_duration);
  r.count("threads", c.threads);

  if (const json* fingers = r.find("fingers")) {
    if (!fingers->is_array()) config_error("fingers", "expected an array");
    const auto defaults = default_gripper().fingers;
    c.fingers.clear();
    for (std::size_t i = 0; i < fingers->size(); ++i) {
      ActuatorParams f = i < defaults.size() ? defaults[i] : ActuatorParams{};
      read_finger((*fingers)[i], "fingers[" + std::to_string(i) + "]", f);
      c.fingers.push_back(f);
    }
  }
  if (const json* pump = r.find("pump")) {
    ObjectReader rp(*pump, "pump");
    rp.number("b_gain", c.pump.b_gain);
    rp.number("omega_max", c.pump.omega_max);
    rp.number("p_final", c.pump.p_final);
    rp.number("vent_speed", c.pump.vent_speed);
    rp.finish();
  }
  if (const json* unc = r.find("uncertainty")) {
    ObjectReader ru(*unc, "uncertainty");
    if (const json* rows = ru.find("rows")) {
      if (!rows->is_array()) config_error("uncertainty.rows", "expected an array");
      c.uncertainty.rows.clear();
      for (std::size_t i = 0; i < rows->size(); ++i) {
        const json& row = (*rows)[i];
        const std::string at = "uncertainty.rows[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != 3 ||
            !std::all_of(row.begin(), row.end(), [](const json& v) { return v.is_number(); })) {
          config_error(at, "expected [speed, sigma_zeta, sigma_omega_n]");
        }
        c.uncertainty.rows.push_back(
            {row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
      }
    }
    ru.finish();
  }
  if (const json* q = r.find("qlearn")) {
    ObjectReader rq(*q, "qlearn");
    rq.number("alpha", c.qlearn.alpha);
    rq.number("gamma", c.qlearn.gamma);
    rq.number("epsilon0", c.qlearn.epsilon0);
    rq.number("epsilon_decay", c.qlearn.epsilon_decay);
    rq.count("episodes", c.qlearn.episodes);
    rq.count("steps_per_episode", c.qlearn.steps_per_episode);
    rq.count("trials_per_step", c.qlearn.trials_per_step);
    if (const json* edges = rq.find("bin_edges")) {
      if (!edges->is_array()) config_error("qlearn.bin_edges", "expected an array");
      c.qlearn.bin_edges.clear();
      for (const auto& e : *edges) {
        if (!e.is_number()) config_error("qlearn.bin_edges", "expected numbers");
        c.qlearn.bin_edges.push_back(e.get<double>());
      }
    }
    rq.finish();
  }
  if (const json* s = r.find("settle")) {
    ObjectReader rs(*s, "settle");
    rs.number("velocity_tol", c.settle.velocity_tol);
    rs.number("window", c.settle.window);
    rs.number("horizon", c.settle.horizon);
    rs.finish();
  }
  r.finish();
}

void check(bool ok, const std::string& path, const std::string& rule) {
  if (!ok) config_error(path, rule);
}

template <typename Validate>
void validate_at(const std::string& prefix, Validate&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    throw Error(ErrorKind::Configuration, prefix + e.what());
  }
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json to_json_value(const TwinConfig& c) {
  json fingers = json::array();
  for (const auto& f : c.fingers) {
    fingers.push_back({{"zeta_fwd", f.zeta_fwd},
                       {"zeta_bwd", f.zeta_bwd},
                       {"omega_n", f.omega_n},
                       {"m_eq", f.m_eq},
                       {"pressure_gain", f.pressure_gain},
                       {"theta_max", f.theta_max},
                       {"softening",
                        {{"k_inf_ratio", f.softening.k_inf_ratio},
                         {"lambda", f.softening.lambda}}}});
  }
  json rows = json::array();
  for (const auto& r : c.uncertainty.rows) {
    rows.push_back({r.speed, r.sigma_zeta, r.sigma_omega_n});
  }
  return {{"seed", c.seed},
          {"dt", c.dt},
          {"target_theta", c.target_theta},
          {"hold_duration", c.hold_duration},
          {"threads", c.threads},
          {"fingers", fingers},
          {"pump",
           {{"b_gain", c.pump.b_gain},
            {"omega_max", c.pump.omega_max},
            {"p_final", c.pump.p_final},
            {"vent_speed", c.pump.vent_speed}}},
          {"uncertainty", {{"rows", rows}}},
          {"qlearn",
           {{"alpha", c.qlearn.alpha},
            {"gamma", c.qlearn.gamma},
            {"epsilon0", c.qlearn.epsilon0},
            {"epsilon_decay", c.qlearn.epsilon_decay},
            {"episodes", c.qlearn.episodes},
            {"steps_per_episode", c.qlearn.steps_per_episode},
            {"trials_per_step", c.qlearn.trials_per_step},
            {"bin_edges", c.qlearn.bin_edges}}},
          {"settle",
           {{"velocity_tol", c.settle.velocity_tol},
            {"window", c.settle.window},
            {"horizon", c.settle.horizon}}}};
}

}  // namespace

void validate(const TwinConfig& c) {
  check(!c.fingers.empty(), "fingers", "at least one finger is required");
  for (std::size_t i = 0; i < c.fingers.size(); ++i) {
    validate_at("fingers[" + std::to_string(i) + "].", [&] { validate(c.fingers[i]); });
    check(c.target_theta <= c.fingers[i].theta_max, "target_theta",
          "must not exceed fingers[" + std::to_string(i) + "].theta_max");
  }
  validate_at("pump.", [&] { validate(c.pump); });
  try {
    validate(c.uncertainty);
  } catch (const Error& e) {
    config_error("uncertainty", e.what());
  }
  check(std::isfinite(c.dt) && c.dt > 0.0, "dt", "must be > 0");
  check(std::isfinite(c.target_theta) && c.target_theta > 0.0, "target_theta", "must be > 0");
  check(std::isfinite(c.hold_duration) && c.hold_duration >= 0.0, "hold_duration",
        "must be >= 0");
  check(c.threads >= 1, "threads", "must be >= 1");
  check(c.qlearn.alpha > 0.0 && c.qlearn.alpha <= 1.0, "qlearn.alpha", "must lie in (0, 1]");
  check(c.qlearn.gamma >= 0.0 && c.qlearn.gamma < 1.0, "qlearn.gamma", "must lie in [0, 1)");
  check(c.qlearn.epsilon0 >= 0.0 && c.qlearn.epsilon0 <= 1.0, "qlearn.epsilon0",
        "must lie in [0, 1]");
  check(c.qlearn.epsilon_decay >= 0.0 && c.qlearn.epsilon_decay <= 1.0,
        "qlearn.epsilon_decay", "must lie in [0, 1]");
  check(c.qlearn.episodes >= 1, "qlearn.episodes", "must be >= 1");
  check(c.qlearn.steps_per_episode >= 1, "qlearn.steps_per_episode", "must be >= 1");
  check(c.qlearn.trials_per_step >= 2, "qlearn.trials_per_step", "must be >= 2");
  for (std::size_t i = 0; i < c.qlearn.bin_edges.size(); ++i) {
    const double e = c.qlearn.bin_edges[i];
    check(std::isfinite(e) && e > 0.0, "qlearn.bin_edges", "edges must be > 0");
    if (i > 0) {
      check(e > c.qlearn.bin_edges[i - 1], "qlearn.bin_edges", "must be strictly increasing");
    }
  }
  check(c.settle.velocity_tol > 0.0, "settle.velocity_tol", "must be > 0");
  check(c.settle.window > 0.0, "settle.window", "must be > 0");
  check(c.settle.horizon > c.settle.window, "settle.horizon", "must exceed settle.window");
}

TwinConfig parse_config(std::string_view text, std::string_view source) {
  TwinConfig c;
  const bool blank = std::all_of(text.begin(), text.end(), [](char ch) {
    return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r';
  });
  if (!blank) {
    json root;
    try {
      root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
      const auto [line, col] = line_column(text, e.byte);
      std::ostringstream msg;
      msg << source << ":" << line << ":" << col << ": " << e.what();
      throw Error(ErrorKind::Parse, msg.str());
    }
    read_config(root, c);
  }
  validate(c);
  return c;
}

TwinConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string serialize_config(const TwinConfig& config) {
  return to_json_value(config).dump(2) + "\n";
}

std::uint64_t config_hash(const TwinConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : serialize_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

GripperSystem make_gripper(const TwinConfig& config) {
  GripperSystem g;
  g.pump = config.pump;
  g.fingers = config.fingers;
  return g;
}

EnvConfig make_env_config(const TwinConfig& config) {
  EnvConfig e;
  e.gripper = make_gripper(config);
  e.table = config.uncertainty;
  e.bin_edges = config.qlearn.bin_edges;
  e.target_theta = config.target_theta;
  e.trials_per_step = config.qlearn.trials_per_step;
  e.steps_per_episode = config.qlearn.steps_per_episode;
  e.dt = config.dt;
  e.settle = config.settle;
  e.threads = config.threads;
  return e;
}

std::string to_json(const RunManifest& m) {
  std::ostringstream hash;
  hash << std::hex;
  hash.width(16);
  hash.fill('0');
  hash << m.config_hash;
  const json j = {{"config_hash", hash.str()},
                  {"seed", m.seed},
                  {"tool_version", m.tool_version},
                  {"scenario", m.scenario},
                  {"started_utc", m.started_utc},
                  {"finished_utc", m.finished_utc},
                  {"argv", m.argv},
                  {"config", json::parse(m.config.empty() ? "{}" : m.config)}};
  return j.dump(2) + "\n";
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace softtwin
