#ifndef MECLAB_EDGE_ANALYTIC_HPP
#define MECLAB_EDGE_ANALYTIC_HPP

#include <utility>

#include "meclab/domain.hpp"
#include "meclab/traffic_analytic.hpp"

namespace meclab {

// Unit convention: arrival rates from TrafficRates are tasks/slot, service
// rates here are tasks/second. Everything converts through cfg.slot_sec at
// this boundary and every latency comes back in seconds.

/// VM-count control of a single compute server.
struct VmPolicy {
  long m_max = 1;
  double mu_max = 0.0;  // tasks/s
  double comp_sec = 0.0;
  double degrade = 0.0;

  /// Total rate with m VMs, no clamping: (m / T0) (1 + d)^(1 - m).
  double raw_rate(long m) const;
  /// Total rate with m tasks present under the optimal policy.
  double rate(long tasks_present) const;
  long vm_count(long tasks_present) const { return tasks_present < m_max ? tasks_present : m_max; }
};

VmPolicy vm_policy(double comp_sec, double degrade);

/// Copy of cfg with comp_sec rescaled so that mu_max equals `mu_max_per_sec`.
NetworkConfig with_mu_max(const NetworkConfig& cfg, double mu_max_per_sec);

struct StabilityReport {
  double chernoff_multiplier = 1.0;
  double required_mu = 0.0;  // tasks/s
  double margin = 0.0;       // mu_max - required_mu, tasks/s
  double r_capacity = 0.0;   // mobiles one CS can sustain, mu_max / beta*
  double stable_fraction_analytic = 1.0;  // P(N < R), N ~ Poisson(nbar)
};

StabilityReport stability_check(const NetworkConfig& cfg, const TrafficRates& rates,
                                const VmPolicy& vm);

/// Stable-CS arrival rate, tasks/slot.
struct ConditionalArrival {
  double closed_form = 0.0;    // lambda_bar (1 - P(N = floor R) / (1 - rho))
  double exact = 0.0;          // beta* E[N | N < R]
  double pmf_at_floor_r = 0.0;
};

/// Throws DomainError when the closed form goes negative.
ConditionalArrival conditional_arrival(const NetworkConfig& cfg, const TrafficRates& rates,
                                       const VmPolicy& vm);

/// Mean sojourn time of an M/M/c queue (per-server rate mu) by Erlang C.
/// Infinite when arrival >= c mu.
double mmc_sojourn(double arrival, double per_server_rate, long servers);

struct AsyncUpper {
  double bound_sec = 0.0;
  double exact_mmm_sec = 0.0;       // M/M/m_max with per-VM rate mu_max / m_max
  bool single_vm_fallback = false;  // m_max == 1: bound is the M/M/1 sojourn
};

AsyncUpper async_comp_upper(const NetworkConfig& cfg, const TrafficRates& rates, const VmPolicy& vm);
/// Infinite when the conditional arrival reaches mu_max.
double async_comp_lower(const NetworkConfig& cfg, const TrafficRates& rates, const VmPolicy& vm);

/// (lower, upper) in seconds for batches arriving at an idle server.
std::pair<double, double> sync_light_bounds(const NetworkConfig& cfg, const TrafficRates& rates,
                                            const VmPolicy& vm);

/// Batch-arrival latency with a server that never idles, seconds. Averages
/// over N ~ Poisson(nbar) restricted to 1 <= N < R.
double sync_heavy_latency(const NetworkConfig& cfg, const TrafficRates& rates, const VmPolicy& vm);
/// Same expression with N fixed at n.
double sync_heavy_latency_given_n(const NetworkConfig& cfg, const TrafficRates& rates,
                                  const VmPolicy& vm, long n);

struct CompLatencyBounds {
  double async_upper = 0.0;
  double async_lower = 0.0;
  double async_exact_mmm = 0.0;
  double sync_light_lower = 0.0;
  double sync_light_upper = 0.0;
  double sync_heavy = 0.0;  // NaN when the support 1 <= N < R is empty
};

CompLatencyBounds comp_latency_bounds(const NetworkConfig& cfg, const TrafficRates& rates,
                                      const VmPolicy& vm);

inline double seconds_to_slots(const NetworkConfig& cfg, double sec) { return sec / cfg.slot_sec; }

}  // namespace meclab

#endif
