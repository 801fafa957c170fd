#ifndef MECLAB_TRAFFIC_ANALYTIC_HPP
#define MECLAB_TRAFFIC_ANALYTIC_HPP

#include <utility>
#include <vector>

#include "meclab/domain.hpp"

namespace meclab {

/// Offloading load implied by a spreading factor. Rates are per slot.
struct TrafficRates {
  double frame_slots = 0.0;         // L* = G* T_min (real-valued)
  double p_l_star = 0.0;            // P(buffer occupied at a frame end)
  double beta_star = 0.0;           // tasks/slot per connected mobile
  double mean_connected_nbar = 0.0; // connected mobiles per CS
  double lambda_bar_star = 0.0;     // tasks/slot per CS
  double a_bar_star = 0.0;          // tasks/frame per CS
};

TrafficRates traffic_rates(const NetworkConfig& cfg, double g_star);

struct ArrivalSweepPoint {
  double ratio = 0.0;
  double g_star = 1.0;
  double lambda_bar_star = 0.0;
};

/// Per-CS arrival rate over a grid of lambda_m / lambda_b ratios (lambda_b
/// held fixed). Each point re-solves the spreading factor and uses its
/// continuous relaxation, so the curve is free of integer-rounding steps.
std::vector<ArrivalSweepPoint> arrival_rate_sweep(const NetworkConfig& cfg,
                                                  const std::vector<double>& ratio_grid);

}  // namespace meclab

#endif
