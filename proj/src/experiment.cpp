#include "meclab/experiment.hpp"

#include <fmt/core.h>

#include <cmath>
#include <limits>

#include "meclab/edge_analytic.hpp"
#include "meclab/numerics.hpp"
#include "meclab/ran_analytic.hpp"
#include "meclab/traffic_analytic.hpp"

namespace meclab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct PointContext {
  std::string experiment;
  std::string variable;
  double value;
  long realizations;
  std::uint64_t seed;       // run seed, printed
  std::uint64_t point_seed;  // drives this point's realizations
};

CsvRow make_row(const PointContext& ctx, std::string metric, double analytic, const Estimate& e) {
  CsvRow r;
  r.experiment = ctx.experiment;
  r.sweep_variable = ctx.variable;
  r.value = ctx.value;
  r.metric = std::move(metric);
  r.analytic = analytic;
  r.n_realizations = e.n;
  r.seed = ctx.seed;
  if (e.defined()) {
    r.sim_mean = e.mean;
    r.sim_ci95_lo = e.lo();
    r.sim_ci95_hi = e.hi();
  } else {
    r.sim_mean = r.sim_ci95_lo = r.sim_ci95_hi = kNaN;
  }
  return r;
}

CsvRow error_row(const PointContext& ctx, std::string_view code) {
  CsvRow r = make_row(ctx, fmt::format("error:{}", code), kNaN, Estimate{});
  r.n_realizations = 0;
  return r;
}

void emit_point(std::vector<CsvRow>& out, const PointContext& ctx, const NetworkConfig& cfg,
                Mode mode, const SimOptions& base_sim, Exec exec) {
  cfg.validate();
  const SpreadingSolution sol = solve_spreading(cfg);
  const auto g = static_cast<double>(sol.g_star);
  const TrafficRates rates = traffic_rates(cfg, g);
  const VmPolicy vm = vm_policy(cfg.comp_sec, cfg.degrade);
  const StabilityReport stab = stability_check(cfg, rates, vm);
  CompLatencyBounds bounds;
  try {
    bounds = comp_latency_bounds(cfg, rates, vm);
  } catch (const DomainError&) {
    bounds = {kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
  }

  MonteCarloJob job{cfg, g, base_sim, ctx.realizations, ctx.point_seed};
  job.opts.run_async = mode != Mode::Sync;
  job.opts.run_sync = mode != Mode::Async;
  const auto runs = exec == Exec::Parallel ? run_monte_carlo_parallel(job) : run_monte_carlo_serial(job);
  const SimStats s = summarize(runs);

  out.push_back(make_row(ctx, "connectivity", connectivity_probability(cfg, g), s.connectivity_fraction));
  out.push_back(make_row(ctx, "stability", stab.stable_fraction_analytic, s.stability_fraction));
  out.push_back(make_row(ctx, "comm_latency",
                         comm_latency_for_frame(cfg.gen_prob, static_cast<double>(sim_frame_slots(cfg, g))),
                         s.mean_comm_latency_slots));
  out.push_back(make_row(ctx, "arrival_rate", rates.lambda_bar_star, s.arrival_rate_empirical));

  auto comp_rows = [&](std::string_view tag, double analytic, double lb, double ub, const Estimate& e) {
    PointContext sub = ctx;
    if (mode == Mode::Both) sub.experiment = fmt::format("{}:{}", ctx.experiment, tag);
    out.push_back(make_row(sub, "comp_latency", analytic, e));
    out.push_back(make_row(sub, "comp_latency_lb", lb, e));
    out.push_back(make_row(sub, "comp_latency_ub", ub, e));
  };
  if (mode != Mode::Sync) {
    comp_rows("async", bounds.async_exact_mmm, bounds.async_lower, bounds.async_upper, s.mean_comp_latency_async_sec);
  }
  if (mode != Mode::Async) {
    comp_rows("sync", bounds.sync_heavy, bounds.sync_light_lower, bounds.sync_light_upper, s.mean_comp_latency_sync_sec);
  }
  if (mode == Mode::Both) out.push_back(make_row(ctx, "sync_async_ratio", kNaN, s.async_sync_ratio));
}

}  // namespace

NetworkConfig apply_sweep_value(const NetworkConfig& base, SweepVariable var, double value) {
  NetworkConfig c = base;
  switch (var) {
    case SweepVariable::LambdaM: c.lambda_m = value; break;
    case SweepVariable::LambdaB: c.lambda_b = value; break;
    case SweepVariable::GenProb: c.gen_prob = value; break;
    case SweepVariable::CompSec: c.comp_sec = value; break;
    case SweepVariable::Degrade: c.degrade = value; break;
    case SweepVariable::Mode: break;
  }
  return c;
}

std::vector<CsvRow> run_experiment(const Experiment& exp, const NetworkConfig& base, const SimOptions& sim,
                                   Exec exec) {
  exp.validate();
  std::vector<CsvRow> out;
  for (std::size_t i = 0; i < exp.grid.size(); ++i) {
    const double v = exp.grid[i];
    Mode mode = exp.mode;
    if (exp.sweep_variable == SweepVariable::Mode) mode = v == 0.0 ? Mode::Async : v == 1.0 ? Mode::Sync : Mode::Both;
    PointContext ctx{exp.name, std::string(sweep_variable_name(exp.sweep_variable)), v, exp.realizations, exp.seed,
                     mix_seed(exp.seed, i)};
    const NetworkConfig cfg = apply_sweep_value(base, exp.sweep_variable, v);
    const std::size_t mark = out.size();
    try {
      emit_point(out, ctx, cfg, mode, sim, exec);
    } catch (const InfeasibleError&) {
      out.resize(mark);
      out.push_back(error_row(ctx, "infeasible"));
    } catch (const ConfigError&) {
      out.resize(mark);
      out.push_back(error_row(ctx, "config"));
    } catch (const WindowError&) {
      out.resize(mark);
      out.push_back(error_row(ctx, "window"));
    } catch (const DomainError&) {
      out.resize(mark);
      out.push_back(error_row(ctx, "domain"));
    }
  }
  return out;
}

std::string format_csv(const std::vector<CsvRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{},{:.9g},{},{:.9g},{:.9g},{:.9g},{:.9g},{},{}\n", r.experiment, r.sweep_variable, r.value,
                       r.metric, r.analytic, r.sim_mean, r.sim_ci95_lo, r.sim_ci95_hi, r.n_realizations, r.seed);
  }
  return out;
}

}  // namespace meclab
