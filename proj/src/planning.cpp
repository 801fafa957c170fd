#include "meclab/planning.hpp"

#include <fmt/core.h>

#include <cmath>
#include <limits>
#include <optional>

#include "meclab/energy.hpp"
#include "meclab/numerics.hpp"

namespace meclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<double> arrival_at(const NetworkConfig& cfg) {
  try {
    const double g = solve_spreading(cfg).continuous_g_star();
    return traffic_rates(cfg, g).lambda_bar_star;
  } catch (const InfeasibleError&) {
    return std::nullopt;
  }
}

double comm_slots(NetworkConfig cfg, double bandwidth) {
  cfg.bandwidth_hz = bandwidth;
  return min_comm_latency(cfg).slots;
}

double comp_bound(const NetworkConfig& cfg, double mu) {
  const NetworkConfig c = with_mu_max(cfg, mu);
  const TrafficRates rates = traffic_rates(c, static_cast<double>(solve_spreading(c).g_star));
  try {
    return async_comp_upper(c, rates, vm_policy(c.comp_sec, c.degrade)).bound_sec;
  } catch (const DomainError&) {
    return kInf;
  }
}

// Smallest x in [lo, hi] with ok(x), for ok monotone false -> true; log-scale bisection.
double smallest_ok(const std::function<bool(double)>& ok, double lo, double hi) {
  for (int i = 0; i < 200 && hi / lo > 1.0 + 1e-12; ++i) {
    const double mid = std::sqrt(lo * hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

PlanningReport plan_network(const NetworkConfig& base, const PlanningQuery& q) {
  q.validate();
  NetworkConfig cfg = base;
  cfg.lambda_m = q.lambda_m;
  cfg.epsilon = q.epsilon;
  cfg.rho = q.rho;
  cfg.delta = q.delta;
  cfg.validate();

  PlanningReport rep;

  // (1) AP density over a log grid of mobiles-per-AP ratios.
  constexpr int kGrid = 601;
  double best = -1.0;
  for (int i = 0; i < kGrid; ++i) {
    const double ratio = std::pow(10.0, -3.0 + 6.0 * i / (kGrid - 1));
    NetworkConfig c = cfg;
    c.lambda_b = q.lambda_m / ratio;
    const auto lam = arrival_at(c);
    if (lam && *lam > best) {
      best = *lam;
      rep.ap_density.value = c.lambda_b;
    }
  }
  if (best < 0.0) throw PlanningInfeasible("coverage", "no AP density on the grid meets the coverage constraint");
  cfg.lambda_b = rep.ap_density.value;
  rep.ap_density.binding = "coverage constraint (max arrival rate per AP)";
  rep.arrival_rate = best;

  // (2) Bandwidth. Comm latency falls as bandwidth grows.
  if (std::isinf(q.target_comm_slots)) {
    rep.bandwidth = {cfg.bandwidth_hz, "none (comm target slack)"};
  } else {
    const auto ok = [&](double b) { return comm_slots(cfg, b) <= q.target_comm_slots; };
    double lo = cfg.bandwidth_hz;
    double hi = cfg.bandwidth_hz;
    int guard = 0;
    while (!ok(hi)) {
      hi *= 2.0;
      if (++guard > 80) {
        throw PlanningInfeasible("comm", fmt::format("comm-latency target {} slots is below the achievable floor",
                                                     q.target_comm_slots));
      }
    }
    guard = 0;
    while (ok(lo) && ++guard < 200) lo *= 0.5;
    rep.bandwidth = {smallest_ok(ok, lo, hi), "comm-latency target"};
  }
  cfg.bandwidth_hz = rep.bandwidth.value;
  const MinCommLatency comm = min_comm_latency(cfg);
  rep.g_star = comm.g_star;
  rep.comm_latency_slots = comm.slots;

  // (3) mu_max: stability floor first, then the comp target via the async upper bound.
  const TrafficRates rates = traffic_rates(cfg, static_cast<double>(comm.g_star));
  const StabilityReport stab = stability_check(cfg, rates, vm_policy(cfg.comp_sec, cfg.degrade));
  rep.required_mu = stab.required_mu;
  const double floor_mu = stab.required_mu;
  if (!(floor_mu > 0.0)) throw PlanningInfeasible("stability", "no offloaded load: required rate is zero");
  if (std::isinf(q.target_comp_sec) || comp_bound(cfg, floor_mu) <= q.target_comp_sec) {
    rep.mu_max = {floor_mu, "stability (rho)"};
  } else {
    const auto ok = [&](double mu) { return comp_bound(cfg, mu) <= q.target_comp_sec; };
    double hi = floor_mu;
    int guard = 0;
    while (!ok(hi)) {
      hi *= 2.0;
      if (++guard > 80) {
        throw PlanningInfeasible("comp", fmt::format("comp-latency target {} s is unreachable", q.target_comp_sec));
      }
    }
    rep.mu_max = {smallest_ok(ok, floor_mu, hi), "comp-latency target"};
  }
  rep.comp_bound_sec = comp_bound(cfg, rep.mu_max.value);
  return rep;
}

std::string format_plan(const PlanningReport& r) {
  std::string out;
  out += fmt::format("ap_density      {:.9g} /m^2   binding: {}\n", r.ap_density.value, r.ap_density.binding);
  out += fmt::format("  arrival_rate  {:.9g} tasks/slot per AP\n", r.arrival_rate);
  out += fmt::format("bandwidth       {:.9g} Hz     binding: {}\n", r.bandwidth.value, r.bandwidth.binding);
  out += fmt::format("  g_star        {}\n", r.g_star);
  out += fmt::format("  comm_latency  {:.9g} slots\n", r.comm_latency_slots);
  out += fmt::format("mu_max          {:.9g} tasks/s binding: {}\n", r.mu_max.value, r.mu_max.binding);
  out += fmt::format("  required_mu   {:.9g} tasks/s\n", r.required_mu);
  out += fmt::format("  comp_bound    {:.9g} s\n", r.comp_bound_sec);
  return out;
}

LatencyReport latency_report(const NetworkConfig& cfg) {
  LatencyReport r;
  r.basics = derive_basics(cfg);
  const MinCommLatency comm = min_comm_latency(cfg);
  r.spreading = comm.spreading;
  const auto g = static_cast<double>(comm.g_star);
  r.connectivity = connectivity_probability(cfg, g);
  r.comm_latency_slots = comm.slots;
  r.rates = traffic_rates(cfg, g);
  r.vm = vm_policy(cfg.comp_sec, cfg.degrade);
  r.stability = stability_check(cfg, r.rates, r.vm);
  r.bounds = comp_latency_bounds(cfg, r.rates, r.vm);
  const double comp_slots = seconds_to_slots(cfg, r.bounds.async_upper);
  if (std::isfinite(comp_slots) && comp_slots > 0.0) {
    const EnergyReport e = energy_report(cfg, g, r.comm_latency_slots, comp_slots);
    r.energy_offload = e.e_off;
    r.energy_local = e.e_loc;
    r.offload_favorable = e.offload_favorable;
  }
  return r;
}

std::string format_latency_report(const LatencyReport& r) {
  std::string out;
  auto line = [&out](std::string_view k, double v) { out += fmt::format("{:<26} {:.9g}\n", k, v); };
  line("zone_radius_m", r.basics.zone_radius);
  line("tmin_slots", r.basics.tmin_slots);
  line("xi_peak_g0", r.spreading.g0);
  line("coverage_threshold_f", r.spreading.f_eps);
  out += fmt::format("{:<26} {}\n", "sparse_regime", r.spreading.s1_nonempty ? "yes" : "no");
  out += fmt::format("{:<26} {}\n", "g_star", r.spreading.g_star);
  line("connectivity", r.connectivity);
  line("comm_latency_slots", r.comm_latency_slots);
  line("frame_slots", r.rates.frame_slots);
  line("p_l", r.rates.p_l_star);
  line("beta_per_slot", r.rates.beta_star);
  line("mean_connected_per_cs", r.rates.mean_connected_nbar);
  line("arrival_rate_per_slot", r.rates.lambda_bar_star);
  out += fmt::format("{:<26} {}\n", "m_max", r.vm.m_max);
  line("mu_max_per_sec", r.vm.mu_max);
  line("chernoff_multiplier", r.stability.chernoff_multiplier);
  line("required_mu_per_sec", r.stability.required_mu);
  line("stability_margin", r.stability.margin);
  line("stable_fraction", r.stability.stable_fraction_analytic);
  line("async_comp_lower_sec", r.bounds.async_lower);
  line("async_comp_upper_sec", r.bounds.async_upper);
  line("async_comp_mmm_sec", r.bounds.async_exact_mmm);
  line("sync_light_lower_sec", r.bounds.sync_light_lower);
  line("sync_light_upper_sec", r.bounds.sync_light_upper);
  line("sync_heavy_sec", r.bounds.sync_heavy);
  line("energy_offload", r.energy_offload);
  line("energy_local", r.energy_local);
  out += fmt::format("{:<26} {}\n", "offload_favorable", r.offload_favorable ? "yes" : "no");
  return out;
}

}  // namespace meclab
