#ifndef MECLAB_CONFIG_HPP
#define MECLAB_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "meclab/domain.hpp"
#include "meclab/simulator.hpp"

namespace meclab {

enum class Mode { Async, Sync, Both };
enum class SweepVariable { LambdaM, LambdaB, GenProb, CompSec, Degrade, Mode };

Mode parse_mode(std::string_view s);
std::string_view mode_name(Mode m);
SweepVariable parse_sweep_variable(std::string_view s);
std::string_view sweep_variable_name(SweepVariable v);

/// One sweep: grid values are applied to `sweep_variable` on top of the base
/// network. For SweepVariable::Mode the grid holds 0 (async), 1 (sync), 2 (both).
struct Experiment {
  std::string name = "sweep";
  SweepVariable sweep_variable = SweepVariable::LambdaM;
  std::vector<double> grid{5e-2};
  Mode mode = Mode::Async;
  long realizations = 2000;
  std::uint64_t seed = 20181016;
  std::string output;  // empty: stdout

  void validate() const;
};

struct PlanningQuery {
  double lambda_m = 5e-2;
  double target_comm_slots = 1e5;
  double target_comp_sec = 0.5;
  double epsilon = 5e-2;
  double rho = 5e-2;
  double delta = 1e-2;

  void validate() const;
};

/// Everything a config file can set.
struct Settings {
  NetworkConfig network;
  SimOptions sim;
  Experiment experiment;
  PlanningQuery plan;
};

/// Ordered `key -> value` pairs from `key = value` lines. '#' starts a
/// comment; blank lines are skipped. Duplicate keys are an error.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Applies one dotted key. Throws ConfigError on unknown keys or bad values.
void apply_setting(Settings& s, std::string_view key, std::string_view value);

Settings load_settings(const std::map<std::string, std::string>& kv, Settings base = {});
Settings load_settings_file(const std::string& path, Settings base = {});

/// All keys apply_setting understands, for help text.
std::vector<std::string> known_setting_keys();

}  // namespace meclab

#endif
