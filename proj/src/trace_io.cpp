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

#include "softtwin/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "softtwin/error.hpp"

namespace softtwin {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view field, std::size_t line) {
  const std::string s(field);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorKind::Parse, "trace line " + std::to_string(line) + ": bad number '" +
                                      s + "'");
  }
  return v;
}

}  // namespace

std::string format_trace_csv(const MultiTrace& trace) {
  const Eigen::Index n = trace.fingers();
  std::string out = "t,p";
  for (Eigen::Index i = 1; i <= n; ++i) out += ",theta_" + std::to_string(i);
  for (Eigen::Index i = 1; i <= n; ++i) out += ",theta_dot_" + std::to_string(i);
  out += ",event\n";
  for (Eigen::Index k = 0; k < trace.rows(); ++k) {
    out += num(trace.time(k));
    out += ',';
    out += num(trace.pressure(k));
    for (Eigen::Index i = 0; i < n; ++i) (out += ',') += num(trace.theta(k, i));
    for (Eigen::Index i = 0; i < n; ++i) (out += ',') += num(trace.theta_dot(k, i));
    out += ',';
    if (static_cast<std::size_t>(k) < trace.events.size()) out += trace.events[k];
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

void write_trace(const MultiTrace& trace, const std::filesystem::path& path) {
  write_text(path, format_trace_csv(trace));
}

MultiTrace parse_trace_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  for (auto l : split(text, '\n')) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (!l.empty()) lines.push_back(l);
  }
  if (lines.empty()) throw Error(ErrorKind::Parse, "trace: missing header");
  const auto header = split(lines[0], ',');
  if (header.size() < 3 || header[0] != "t" || header[1] != "p" || header.back() != "event" ||
      (header.size() - 3) % 2 != 0) {
    throw Error(ErrorKind::Parse, "trace: unexpected header");
  }
  const auto n = static_cast<Eigen::Index>((header.size() - 3) / 2);
  const auto rows = static_cast<Eigen::Index>(lines.size() - 1);

  MultiTrace trace;
  trace.time.resize(rows);
  trace.pressure.resize(rows);
  trace.theta.resize(rows, n);
  trace.theta_dot.resize(rows, n);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const std::size_t lineno = static_cast<std::size_t>(k) + 2;
    const auto f = split(lines[static_cast<std::size_t>(k) + 1], ',');
    if (f.size() != header.size()) {
      throw Error(ErrorKind::Parse, "trace line " + std::to_string(lineno) +
                                        ": expected " + std::to_string(header.size()) +
                                        " fields");
    }
    trace.time(k) = parse_double(f[0], lineno);
    trace.pressure(k) = parse_double(f[1], lineno);
    for (Eigen::Index i = 0; i < n; ++i) {
      trace.theta(k, i) = parse_double(f[static_cast<std::size_t>(2 + i)], lineno);
      trace.theta_dot(k, i) = parse_double(f[static_cast<std::size_t>(2 + n + i)], lineno);
    }
    trace.events.emplace_back(f.back());
    if (!trace.settle_index) {
      for (const auto e : split(f.back(), '|')) {
        if (e == trace_event::kSettled) trace.settle_index = k;
      }
    }
  }
  return trace;
}

MultiTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace_csv(buf.str());
}

std::string format_trials_csv(const std::vector<TrialRecord>& trials) {
  std::string out = "trial,seed,zeta,omega_n,e_ss\n";
  for (const auto& t : trials) {
    out += std::to_string(t.trial) + ',' + std::to_string(t.seed) + ',' + num(t.zeta) + ',' +
           num(t.omega_n) + ',' + num(t.e_ss) + '\n';
  }
  return out;
}

std::string format_train_log_csv(const TrainLog& log) {
  std::string out = "episode,step,epsilon,state,action,reward,next_state\n";
  for (std::size_t e = 0; e < log.episodes.size(); ++e) {
    const auto& ep = log.episodes[e];
    for (std::size_t k = 0; k < ep.steps.size(); ++k) {
      const auto& t = ep.steps[k];
      out += std::to_string(e) + ',' + std::to_string(k) + ',' + num(ep.epsilon) + ',' +
             std::to_string(t.state) + ',' + std::to_string(t.action) + ',' + num(t.reward) +
             ',' + std::to_string(t.next_state) + '\n';
    }
  }
  return out;
}

std::string format_policy_csv(const TrainLog& log, const SpeedActionSet& actions) {
  std::string out = "episode,cumulative_reward";
  const std::size_t states = log.episodes.empty() ? 0 : log.episodes.front().greedy_policy.size();
  for (std::size_t s = 0; s < states; ++s) out += ",greedy_speed_" + std::to_string(s);
  out += '\n';
  for (std::size_t e = 0; e < log.episodes.size(); ++e) {
    const auto& ep = log.episodes[e];
    out += std::to_string(e) + ',' + num(ep.cumulative_reward);
    for (const int a : ep.greedy_policy) {
      out += ',' + num(actions.speeds[static_cast<std::size_t>(a)]);
    }
    out += '\n';
  }
  return out;
}

std::string format_qtable_csv(const QTable& q) {
  std::string out = "state";
  for (int a = 0; a < q.actions(); ++a) out += ",q_" + std::to_string(a);
  out += '\n';
  for (int s = 0; s < q.states(); ++s) {
    out += std::to_string(s);
    for (int a = 0; a < q.actions(); ++a) out += ',' + num(q.values(s, a));
    out += '\n';
  }
  return out;
}

std::string speed_label(double speed) {
  const double twelfths = speed / (std::numbers::pi / 12.0);
  const double k = std::round(twelfths);
  if (k >= 1.0 && std::abs(twelfths - k) < 1e-9) {
    auto n = static_cast<long>(k);
    long d = 12;
    for (long g = 12; g > 1; --g) {
      if (n % g == 0 && d % g == 0) {
        n /= g;
        d /= g;
        break;
      }
    }
    std::string out = n == 1 ? "pi" : std::to_string(n) + "pi";
    if (d != 1) out += "/" + std::to_string(d);
    return out;
  }
  return num(speed);
}

std::string format_summary(const Summary& s) {
  const auto opt = [](const std::optional<double>& v) { return v ? num(*v) : "null"; };
  std::ostringstream out;
  out << "scenario: " << s.scenario << '\n';
  out << "seed: " << (s.seed ? std::to_string(*s.seed) : "null") << '\n';
  out << "n_trials: " << (s.n_trials ? std::to_string(*s.n_trials) : "null") << '\n';
  out << "mean_e_ss: " << opt(s.mean_e_ss) << '\n';
  out << "std_e_ss: " << opt(s.std_e_ss) << '\n';
  out << "max_transient_diff_deg: " << opt(s.max_transient_diff_deg) << '\n';
  out << "steady_diff_deg: " << opt(s.steady_diff_deg) << '\n';
  out << "greedy_policy: ";
  if (!s.greedy_policy) {
    out << "null";
  } else {
    out << '{';
    for (std::size_t i = 0; i < s.greedy_policy->size(); ++i) {
      const auto& v = (*s.greedy_policy)[i];
      out << (i ? ", " : "") << i << ": " << (v ? speed_label(*v) : "unvisited");
    }
    out << '}';
  }
  out << '\n';
  return out.str();
}

}  // namespace softtwin
