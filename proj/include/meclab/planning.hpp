#ifndef MECLAB_PLANNING_HPP
#define MECLAB_PLANNING_HPP

#include <stdexcept>
#include <string>

#include "meclab/config.hpp"
#include "meclab/domain.hpp"
#include "meclab/edge_analytic.hpp"
#include "meclab/ran_analytic.hpp"
#include "meclab/traffic_analytic.hpp"

namespace meclab {

/// A planning target no admissible resource level can reach.
class PlanningInfeasible : public std::runtime_error {
 public:
  PlanningInfeasible(std::string target, const std::string& what)
      : std::runtime_error(what), target_(std::move(target)) {}
  const std::string& target() const { return target_; }

 private:
  std::string target_;
};

struct PlanItem {
  double value = 0.0;
  std::string binding;
};

struct PlanningReport {
  PlanItem ap_density;    // lambda_b, 1/m^2
  PlanItem bandwidth;     // Hz
  PlanItem mu_max;        // tasks/s
  double arrival_rate = 0.0;        // Lambda* at the chosen lambda_b, tasks/slot
  long g_star = 1;
  double comm_latency_slots = 0.0;  // at the chosen bandwidth
  double comp_bound_sec = 0.0;      // async upper bound at the chosen mu_max
  double required_mu = 0.0;         // stability floor, tasks/s
};

/// lambda_b maximizing the per-AP arrival rate under the coverage constraint,
/// then the smallest bandwidth meeting the comm target, then the smallest
/// mu_max meeting both stability and the comp target. Infinite targets are
/// slack. The rest of `base` (p, alpha, theta, ...) is held fixed.
PlanningReport plan_network(const NetworkConfig& base, const PlanningQuery& q);

std::string format_plan(const PlanningReport& r);

/// Every closed-form quantity for one configuration.
struct LatencyReport {
  DerivedBasics basics;
  SpreadingSolution spreading;
  double connectivity = 0.0;
  double comm_latency_slots = 0.0;
  TrafficRates rates;
  VmPolicy vm;
  StabilityReport stability;
  CompLatencyBounds bounds;
  double energy_offload = 0.0;
  double energy_local = 0.0;
  bool offload_favorable = false;
};

LatencyReport latency_report(const NetworkConfig& cfg);
std::string format_latency_report(const LatencyReport& r);

}  // namespace meclab

#endif
