#include "meclab/traffic_analytic.hpp"

#include <cmath>

#include "meclab/numerics.hpp"
#include "meclab/ran_analytic.hpp"

namespace meclab {

TrafficRates traffic_rates(const NetworkConfig& cfg, double g_star) {
  if (!(g_star >= 1.0)) throw DomainError("traffic_rates: g_star must be >= 1");
  TrafficRates r;
  r.frame_slots = g_star * derive_basics(cfg).tmin_slots;
  r.p_l_star = -std::expm1(r.frame_slots * std::log1p(-cfg.gen_prob));
  r.beta_star = r.p_l_star / r.frame_slots;
  r.mean_connected_nbar = (1.0 - cfg.delta) * (1.0 - cfg.epsilon) * cfg.lambda_m / cfg.lambda_b;
  r.lambda_bar_star = r.mean_connected_nbar * r.beta_star;
  r.a_bar_star = r.mean_connected_nbar * r.p_l_star;
  return r;
}

std::vector<ArrivalSweepPoint> arrival_rate_sweep(const NetworkConfig& cfg,
                                                  const std::vector<double>& ratio_grid) {
  for (std::size_t i = 0; i < ratio_grid.size(); ++i) {
    if (!(ratio_grid[i] > 0.0) || (i > 0 && !(ratio_grid[i] > ratio_grid[i - 1]))) {
      throw DomainError("arrival_rate_sweep: grid must be positive and ascending");
    }
  }
  std::vector<ArrivalSweepPoint> out;
  out.reserve(ratio_grid.size());
  for (double ratio : ratio_grid) {
    NetworkConfig c = cfg;
    c.lambda_m = ratio * cfg.lambda_b;
    const double g = solve_spreading(c).continuous_g_star();
    out.push_back({ratio, g, traffic_rates(c, g).lambda_bar_star});
  }
  return out;
}

}  // namespace meclab
