#include "meclab/config.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace meclab {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view want) {
  throw ConfigError({fmt::format("{}: '{}' is not {}", key, value, want)});
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad(key, v, "a number");
  return out;
}

long to_long(std::string_view key, std::string_view v) {
  long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad(key, v, "an integer");
  return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad(key, v, "an unsigned 64-bit integer");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key, v, "a boolean");
}

std::vector<double> to_grid(std::string_view key, std::string_view v) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const auto comma = v.find(',', pos);
    const auto item = trim(v.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (!item.empty()) out.push_back(to_double(key, item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

using Setter = std::function<void(Settings&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    auto real = [&t](std::string name, auto member_of) {
      t[name] = [member_of](Settings& s, std::string_view k, std::string_view v) { member_of(s) = to_double(k, v); };
    };
    real("network.lambda_b", [](Settings& s) -> double& { return s.network.lambda_b; });
    real("network.lambda_m", [](Settings& s) -> double& { return s.network.lambda_m; });
    real("network.alpha", [](Settings& s) -> double& { return s.network.alpha; });
    real("network.theta", [](Settings& s) -> double& { return s.network.theta; });
    real("network.delta", [](Settings& s) -> double& { return s.network.delta; });
    real("network.epsilon", [](Settings& s) -> double& { return s.network.epsilon; });
    real("network.rho", [](Settings& s) -> double& { return s.network.rho; });
    real("network.bandwidth_hz", [](Settings& s) -> double& { return s.network.bandwidth_hz; });
    real("network.task_bits", [](Settings& s) -> double& { return s.network.task_bits; });
    real("network.slot_sec", [](Settings& s) -> double& { return s.network.slot_sec; });
    real("network.gen_prob", [](Settings& s) -> double& { return s.network.gen_prob; });
    real("network.comp_sec", [](Settings& s) -> double& { return s.network.comp_sec; });
    real("network.degrade", [](Settings& s) -> double& { return s.network.degrade; });
    real("network.tx_power", [](Settings& s) -> double& { return s.network.tx_power; });
    real("energy.c4", [](Settings& s) -> double& { return s.network.energy_c4; });
    real("energy.c5", [](Settings& s) -> double& { return s.network.energy_c5; });
    real("sim.window_factor", [](Settings& s) -> double& { return s.sim.window_factor; });
    real("sim.horizon_slots", [](Settings& s) -> double& { return s.sim.horizon_slots; });
    real("sim.warmup_fraction", [](Settings& s) -> double& { return s.sim.warmup_fraction; });
    real("plan.lambda_m", [](Settings& s) -> double& { return s.plan.lambda_m; });
    real("plan.target_comm_slots", [](Settings& s) -> double& { return s.plan.target_comm_slots; });
    real("plan.target_comp_sec", [](Settings& s) -> double& { return s.plan.target_comp_sec; });
    real("plan.epsilon", [](Settings& s) -> double& { return s.plan.epsilon; });
    real("plan.rho", [](Settings& s) -> double& { return s.plan.rho; });
    real("plan.delta", [](Settings& s) -> double& { return s.plan.delta; });

    t["network.theta_db"] = [](Settings& s, std::string_view k, std::string_view v) {
      s.network.theta = theta_from_db(to_double(k, v));
    };
    t["sim.min_frames"] = [](Settings& s, std::string_view k, std::string_view v) { s.sim.min_frames = to_long(k, v); };
    t["sim.poisson_twin"] = [](Settings& s, std::string_view k, std::string_view v) { s.sim.poisson_twin = to_bool(k, v); };
    t["sim.interferers"] = [](Settings& s, std::string_view k, std::string_view v) {
      if (v == "buffer") s.sim.interferers = InterfererModel::BufferState;
      else if (v == "iid") s.sim.interferers = InterfererModel::IidThinning;
      else bad(k, v, "one of buffer|iid");
    };
    t["run.realizations"] = [](Settings& s, std::string_view k, std::string_view v) { s.experiment.realizations = to_long(k, v); };
    t["run.seed"] = [](Settings& s, std::string_view k, std::string_view v) { s.experiment.seed = to_u64(k, v); };
    t["run.mode"] = [](Settings& s, std::string_view k, std::string_view v) {
      try {
        s.experiment.mode = parse_mode(v);
      } catch (const ConfigError&) {
        bad(k, v, "one of async|sync|both");
      }
    };
    t["run.out"] = [](Settings& s, std::string_view, std::string_view v) { s.experiment.output = std::string(v); };
    t["experiment.name"] = [](Settings& s, std::string_view, std::string_view v) { s.experiment.name = std::string(v); };
    t["experiment.sweep_variable"] = [](Settings& s, std::string_view k, std::string_view v) {
      try {
        s.experiment.sweep_variable = parse_sweep_variable(v);
      } catch (const ConfigError&) {
        bad(k, v, "one of lambda_m|lambda_b|p|T0|d|mode");
      }
    };
    t["experiment.grid"] = [](Settings& s, std::string_view k, std::string_view v) { s.experiment.grid = to_grid(k, v); };
    return t;
  }();
  return table;
}

}  // namespace

Mode parse_mode(std::string_view s) {
  if (s == "async") return Mode::Async;
  if (s == "sync") return Mode::Sync;
  if (s == "both") return Mode::Both;
  throw ConfigError({fmt::format("mode '{}' is not one of async|sync|both", s)});
}

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::Async: return "async";
    case Mode::Sync: return "sync";
    case Mode::Both: return "both";
  }
  return "?";
}

SweepVariable parse_sweep_variable(std::string_view s) {
  if (s == "lambda_m") return SweepVariable::LambdaM;
  if (s == "lambda_b") return SweepVariable::LambdaB;
  if (s == "p") return SweepVariable::GenProb;
  if (s == "T0") return SweepVariable::CompSec;
  if (s == "d") return SweepVariable::Degrade;
  if (s == "mode") return SweepVariable::Mode;
  throw ConfigError({fmt::format("sweep variable '{}' is not one of lambda_m|lambda_b|p|T0|d|mode", s)});
}

std::string_view sweep_variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::LambdaM: return "lambda_m";
    case SweepVariable::LambdaB: return "lambda_b";
    case SweepVariable::GenProb: return "p";
    case SweepVariable::CompSec: return "T0";
    case SweepVariable::Degrade: return "d";
    case SweepVariable::Mode: return "mode";
  }
  return "?";
}

void Experiment::validate() const {
  std::vector<std::string> errs;
  if (grid.empty()) errs.emplace_back("experiment.grid: must not be empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      errs.emplace_back("experiment.grid: must be strictly ascending");
      break;
    }
  }
  if (sweep_variable == SweepVariable::Mode) {
    for (double g : grid) {
      if (g != 0.0 && g != 1.0 && g != 2.0) {
        errs.emplace_back("experiment.grid: mode sweep takes 0 (async), 1 (sync), 2 (both)");
        break;
      }
    }
  }
  if (realizations < 1) errs.emplace_back("run.realizations: must be >= 1");
  if (!errs.empty()) throw ConfigError(std::move(errs));
}

void PlanningQuery::validate() const {
  std::vector<std::string> errs;
  if (!(lambda_m > 0.0)) errs.emplace_back("plan.lambda_m: must be positive");
  if (!(target_comm_slots > 0.0)) errs.emplace_back("plan.target_comm_slots: must be positive");
  if (!(target_comp_sec > 0.0)) errs.emplace_back("plan.target_comp_sec: must be positive");
  for (auto [name, v] : {std::pair{"plan.epsilon", epsilon}, {"plan.rho", rho}, {"plan.delta", delta}}) {
    if (!(v > 0.0 && v < 1.0)) errs.push_back(fmt::format("{}: must lie in (0, 1)", name));
  }
  if (!errs.empty()) throw ConfigError(std::move(errs));
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::vector<std::string> errs;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        errs.push_back(fmt::format("line {}: expected 'key = value'", line_no));
      } else {
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) errs.push_back(fmt::format("line {}: empty key", line_no));
        else if (!out.emplace(key, value).second) errs.push_back(fmt::format("line {}: duplicate key '{}'", line_no, key));
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (!errs.empty()) throw ConfigError(std::move(errs));
  return out;
}

void apply_setting(Settings& s, std::string_view key, std::string_view value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError({fmt::format("unknown key '{}'", key)});
  it->second(s, key, value);
}

Settings load_settings(const std::map<std::string, std::string>& kv, Settings base) {
  std::vector<std::string> errs;
  for (const auto& [k, v] : kv) {
    try {
      apply_setting(base, k, v);
    } catch (const ConfigError& e) {
      errs.insert(errs.end(), e.violations().begin(), e.violations().end());
    }
  }
  if (!errs.empty()) throw ConfigError(std::move(errs));
  return base;
}

Settings load_settings_file(const std::string& path, Settings base) {
  std::ifstream in(path);
  if (!in) throw ConfigError({fmt::format("cannot read config file '{}'", path)});
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_settings(parse_key_values(ss.str()), std::move(base));
}

std::vector<std::string> known_setting_keys() {
  std::vector<std::string> out;
  for (const auto& [k, v] : setters()) out.push_back(k);
  return out;
}

}  // namespace meclab
