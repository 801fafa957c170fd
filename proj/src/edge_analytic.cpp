#include "meclab/edge_analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "meclab/numerics.hpp"

namespace meclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double per_second(const NetworkConfig& cfg, double per_slot) { return per_slot / cfg.slot_sec; }

// Mobiles one CS can sustain: mu_max / beta*, both per slot.
double capacity_r(const NetworkConfig& cfg, const TrafficRates& rates, const VmPolicy& vm) {
  return vm.mu_max * cfg.slot_sec / rates.beta_star;
}

// Largest n with n < R.
long below_r(double r) { return static_cast<long>(std::ceil(r)) - 1; }

// Heavy-traffic support: n with R - n clear of rounding noise, so a capacity
// meant to be an integer does not put a near-zero gap in 1 / (R - n).
long heavy_support_hi(double r) { return static_cast<long>(std::ceil(r * (1.0 - 1e-9))) - 1; }

double factorial(long n) { return std::exp(std::lgamma(static_cast<double>(n) + 1.0)); }

}  // namespace

double VmPolicy::raw_rate(long m) const {
  if (m <= 0) return 0.0;
  return static_cast<double>(m) / comp_sec * std::pow(1.0 + degrade, 1.0 - static_cast<double>(m));
}

double VmPolicy::rate(long tasks_present) const { return raw_rate(vm_count(tasks_present)); }

VmPolicy vm_policy(double comp_sec, double degrade) {
  if (!(comp_sec > 0.0) || !(degrade > 0.0)) throw DomainError("vm_policy: T0 and d must be positive");
  VmPolicy vm;
  vm.comp_sec = comp_sec;
  vm.degrade = degrade;
  vm.m_max = std::max(1L, std::lround(1.0 / std::log1p(degrade)));
  vm.mu_max = vm.raw_rate(vm.m_max);
  return vm;
}

NetworkConfig with_mu_max(const NetworkConfig& cfg, double mu_max_per_sec) {
  NetworkConfig out = cfg;
  const VmPolicy vm = vm_policy(cfg.comp_sec, cfg.degrade);
  out.comp_sec = cfg.comp_sec * vm.mu_max / mu_max_per_sec;
  return out;
}

StabilityReport stability_check(const NetworkConfig& cfg, const TrafficRates& rates,
                                const VmPolicy& vm) {
  StabilityReport rep;
  const double nbar = rates.mean_connected_nbar;
  if (nbar > 0.0) {
    const double arg = -std::log(cfg.rho) / (nbar * std::numbers::e) - 1.0 / std::numbers::e;
    rep.chernoff_multiplier = std::exp(lambert_w(arg, Branch::Principal) + 1.0);
  }
  rep.required_mu = per_second(cfg, rates.lambda_bar_star) * rep.chernoff_multiplier;
  rep.margin = vm.mu_max - rep.required_mu;
  rep.r_capacity = capacity_r(cfg, rates, vm);
  rep.stable_fraction_analytic = poisson_cdf(nbar, below_r(rep.r_capacity));
  return rep;
}

ConditionalArrival conditional_arrival(const NetworkConfig& cfg, const TrafficRates& rates,
                                       const VmPolicy& vm) {
  const double r = capacity_r(cfg, rates, vm);
  const double nbar = rates.mean_connected_nbar;
  ConditionalArrival out;
  out.pmf_at_floor_r = poisson_pmf(nbar, static_cast<long>(std::floor(r)));
  out.closed_form = rates.lambda_bar_star * (1.0 - out.pmf_at_floor_r / (1.0 - cfg.rho));
  if (out.closed_form < 0.0) {
    throw DomainError("conditional_arrival: closed form negative, P(N = floor R) exceeds 1 - rho");
  }
  const long hi = below_r(r);
  out.exact = hi < 1 || nbar == 0.0
                  ? 0.0
                  : rates.beta_star *
                        truncated_poisson_moment(nbar, 0, hi, [](long n) { return static_cast<double>(n); });
  return out;
}

double mmc_sojourn(double arrival, double per_server_rate, long servers) {
  const double c = static_cast<double>(servers);
  if (arrival >= c * per_server_rate) return kInf;
  const double a = arrival / per_server_rate;
  const double load = a / c;
  // Finite head of the normalizer plus its geometric tail in closed form.
  double head = 0.0;
  double term = 1.0;
  for (long k = 0; k < servers; ++k) {
    head += term;
    term *= a / static_cast<double>(k + 1);
  }
  const double tail = std::pow(a, c) / factorial(servers) / (1.0 - load);
  const double p0 = 1.0 / (head + tail);
  const double wait = p0 * std::pow(a, c) / (factorial(servers) * (1.0 - load) * (1.0 - load) * c * per_server_rate);
  return wait + 1.0 / per_server_rate;
}

AsyncUpper async_comp_upper(const NetworkConfig& cfg, const TrafficRates& rates, const VmPolicy& vm) {
  const ConditionalArrival cond = conditional_arrival(cfg, rates, vm);
  const double lam_cond = per_second(cfg, cond.closed_form);
  AsyncUpper out;
  out.exact_mmm_sec = mmc_sojourn(lam_cond, vm.mu_max / static_cast<double>(vm.m_max), vm.m_max);
  if (vm.m_max == 1) {
    out.single_vm_fallback = true;
    out.bound_sec = lam_cond >= vm.mu_max ? kInf : 1.0 / (vm.mu_max - lam_cond);
    return out;
  }
  const double m = static_cast<double>(vm.m_max);
  const double lead = m / vm.mu_max;
  const double factor = 1.0 - cond.pmf_at_floor_r / (1.0 - cfg.rho);
  out.bound_sec = lead + lead * lead * per_second(cfg, rates.lambda_bar_star) /
                             (factorial(vm.m_max - 1) * (m - 1.0) * (m - 1.0)) * factor;
  return out;
}

double async_comp_lower(const NetworkConfig& cfg, const TrafficRates& rates, const VmPolicy& vm) {
  const double lam_cond = per_second(cfg, conditional_arrival(cfg, rates, vm).closed_form);
  const double gap = vm.mu_max - lam_cond;
  return gap <= 0.0 ? kInf : 1.0 / gap;
}

std::pair<double, double> sync_light_bounds(const NetworkConfig& cfg, const TrafficRates& rates,
                                            const VmPolicy& vm) {
  (void)cfg;
  const double a = rates.a_bar_star;
  if (a < 0.0) throw DomainError("sync_light_bounds: negative batch mean");
  // E[A | A > 0] for A ~ Poisson(a); tends to 1 as a -> 0.
  const double cond_mean = a == 0.0 ? 1.0 : a / -std::expm1(-a);
  const double shape = 1.0 + cond_mean;
  return {shape / (2.0 * vm.mu_max), shape / (2.0 * vm.raw_rate(1))};
}

double sync_heavy_latency_given_n(const NetworkConfig& cfg, const TrafficRates& rates,
                                  const VmPolicy& vm, long n) {
  const double r = capacity_r(cfg, rates, vm);
  if (n < 1 || n > heavy_support_hi(r)) {
    throw DomainError("sync_heavy_latency: need 1 <= N < R");
  }
  const double pl = rates.p_l_star;
  const double nn = static_cast<double>(n);
  const double frames = 1.0 / pl / (r - nn) + 0.5 * (r + 1.0 / pl) / nn - 1.0;
  return frames * rates.frame_slots * cfg.slot_sec;
}

double sync_heavy_latency(const NetworkConfig& cfg, const TrafficRates& rates, const VmPolicy& vm) {
  const double r = capacity_r(cfg, rates, vm);
  const long hi = heavy_support_hi(r);
  if (hi < 1) throw DomainError("sync_heavy_latency: support 1 <= N < R is empty");
  const double nbar = rates.mean_connected_nbar;
  const double pl = rates.p_l_star;
  const double inv_gap = truncated_poisson_moment(nbar, 1, hi, [r](long n) { return 1.0 / (r - static_cast<double>(n)); });
  const double inv_n = truncated_poisson_moment(nbar, 1, hi, [](long n) { return 1.0 / static_cast<double>(n); });
  const double frames = inv_gap / pl + 0.5 * (r + 1.0 / pl) * inv_n - 1.0;
  return frames * rates.frame_slots * cfg.slot_sec;
}

CompLatencyBounds comp_latency_bounds(const NetworkConfig& cfg, const TrafficRates& rates,
                                      const VmPolicy& vm) {
  CompLatencyBounds b;
  const AsyncUpper up = async_comp_upper(cfg, rates, vm);
  b.async_upper = up.bound_sec;
  b.async_exact_mmm = up.exact_mmm_sec;
  b.async_lower = async_comp_lower(cfg, rates, vm);
  const auto [lo, hi] = sync_light_bounds(cfg, rates, vm);
  b.sync_light_lower = lo;
  b.sync_light_upper = hi;
  try {
    b.sync_heavy = sync_heavy_latency(cfg, rates, vm);
  } catch (const DomainError&) {
    b.sync_heavy = std::numeric_limits<double>::quiet_NaN();
  }
  return b;
}

}  // namespace meclab
