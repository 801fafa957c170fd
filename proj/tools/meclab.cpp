#include <CLI11.hpp>
#include <fmt/core.h>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "meclab/config.hpp"
#include "meclab/experiment.hpp"
#include "meclab/kernels.hpp"
#include "meclab/planning.hpp"
#include "meclab/ran_analytic.hpp"
#include "meclab/validation.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitConfig = 3;
constexpr int kExitInfeasible = 4;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<long> realizations;
  std::optional<std::string> out;
  std::optional<std::string> mode;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "key = value config file");
  cmd->add_option("--seed", f.seed, "base RNG seed");
  cmd->add_option("--realizations", f.realizations, "Monte Carlo realizations per point");
  cmd->add_option("--out", f.out, "output path (default stdout)");
  cmd->add_option("--mode", f.mode, "async|sync|both");
  cmd->allow_extras();
}

// Extras look like --network.lambda_b=0.03 or --network.lambda_b 0.03.
std::map<std::string, std::string> extra_overrides(const std::vector<std::string>& extras) {
  std::map<std::string, std::string> kv;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    std::string a = extras[i];
    if (a.rfind("--", 0) != 0) throw meclab::ConfigError({fmt::format("unexpected argument '{}'", a)});
    a = a.substr(2);
    if (const auto eq = a.find('='); eq != std::string::npos) {
      kv[a.substr(0, eq)] = a.substr(eq + 1);
    } else if (i + 1 < extras.size()) {
      kv[a] = extras[++i];
    } else {
      throw meclab::ConfigError({fmt::format("missing value for --{}", a)});
    }
  }
  return kv;
}

meclab::Settings resolve(const CommonFlags& f, const std::vector<std::string>& extras) {
  meclab::Settings s;
  if (!f.config.empty()) s = meclab::load_settings_file(f.config, s);
  s = meclab::load_settings(extra_overrides(extras), s);
  if (f.seed) s.experiment.seed = *f.seed;
  if (f.realizations) s.experiment.realizations = *f.realizations;
  if (f.out) s.experiment.output = *f.out;
  if (f.mode) s.experiment.mode = meclab::parse_mode(*f.mode);
  s.network.validate();
  return s;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw meclab::ConfigError({fmt::format("cannot write '{}'", path)});
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  meclab::apply_thread_limit_from_env();
  CLI::App app{"Edge-computing network latency lab: closed forms and Monte Carlo"};
  app.require_subcommand(1);

  CommonFlags f;
  auto* analytic = app.add_subcommand("analytic", "print every closed-form quantity for one config");
  auto* simulate = app.add_subcommand("simulate", "run one sweep and write CSV");
  auto* plan = app.add_subcommand("plan", "size AP density, bandwidth and CS rate for targets");
  auto* validate = app.add_subcommand("validate", "cross-check analytic results against simulation");
  for (auto* cmd : {analytic, simulate, plan, validate}) add_common(cmd, f);
  std::vector<int> only;
  bool negative_control = false;
  bool serial = false;
  validate->add_option("--only", only, "check ids to run");
  validate->add_flag("--negative-control", negative_control, "flip the SIR threshold sign in the simulated half");
  simulate->add_flag("--serial", serial, "single-threaded reference path");

  CLI11_PARSE(app, argc, argv);
  CLI::App* cmd = app.get_subcommands().front();

  try {
    const meclab::Settings s = resolve(f, cmd->remaining());
    if (cmd == analytic) {
      write_output(s.experiment.output, meclab::format_latency_report(meclab::latency_report(s.network)));
    } else if (cmd == simulate) {
      const auto rows = meclab::run_experiment(s.experiment, s.network, s.sim,
                                               serial ? meclab::Exec::Serial : meclab::Exec::Parallel);
      write_output(s.experiment.output, meclab::format_csv(rows));
    } else if (cmd == plan) {
      write_output(s.experiment.output, meclab::format_plan(meclab::plan_network(s.network, s.plan)));
    } else {
      meclab::ValidationSettings vs;
      vs.base = s.network;
      vs.realizations = s.experiment.realizations;
      vs.seed = s.experiment.seed;
      vs.flip_theta_in_simulation = negative_control;
      const auto checks = meclab::validate_all(vs, only);
      write_output(s.experiment.output, meclab::format_checks(checks));
      if (!meclab::no_failures(checks)) return kExitValidation;
    }
  } catch (const meclab::ConfigError& e) {
    fmt::print(stderr, "config error:\n");
    for (const auto& v : e.violations()) fmt::print(stderr, "  {}\n", v);
    return kExitConfig;
  } catch (const meclab::PlanningInfeasible& e) {
    fmt::print(stderr, "infeasible target ({}): {}\n", e.target(), e.what());
    return kExitInfeasible;
  } catch (const meclab::InfeasibleError& e) {
    fmt::print(stderr, "infeasible: {}\n", e.what());
    return kExitInfeasible;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
