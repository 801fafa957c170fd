#ifndef MECLAB_ENERGY_HPP
#define MECLAB_ENERGY_HPP

#include "meclab/domain.hpp"

namespace meclab {

// Offload vs local energy, both up to the free constants c4 and c5.
struct EnergyReport {
  double e_off = 0.0;
  double e_loc = 0.0;
  double savings = 0.0;  // e_loc - e_off
  bool offload_favorable = false;
};

/// The local-computing deadline is the total latency t_comm + t_comp, in slots.
EnergyReport energy_report(const NetworkConfig& cfg, double g_star, double t_comm_slots,
                           double t_comp_slots);

}  // namespace meclab

#endif
