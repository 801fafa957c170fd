#include "meclab/energy.hpp"

#include <cmath>

#include "meclab/numerics.hpp"

namespace meclab {

EnergyReport energy_report(const NetworkConfig& cfg, double g_star, double t_comm_slots,
                           double t_comp_slots) {
  const double deadline = t_comm_slots + t_comp_slots;
  if (!(t_comm_slots > 0.0) || !(t_comp_slots > 0.0) || !std::isfinite(deadline)) {
    throw DomainError("energy_report: latencies must be finite and positive");
  }
  EnergyReport r;
  const double ap_term = std::pow(cfg.lambda_b, cfg.alpha / 2.0);
  r.e_off = cfg.energy_c4 * g_star * cfg.task_bits / ap_term;
  r.e_loc = cfg.energy_c5 * std::pow(cfg.task_bits, 3) / (deadline * deadline);
  r.savings = r.e_loc - r.e_off;
  r.offload_favorable = cfg.task_bits * cfg.task_bits * ap_term >
                        cfg.energy_c4 / cfg.energy_c5 * g_star * deadline * deadline;
  return r;
}

}  // namespace meclab
