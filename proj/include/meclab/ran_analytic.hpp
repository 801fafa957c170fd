#ifndef MECLAB_RAN_ANALYTIC_HPP
#define MECLAB_RAN_ANALYTIC_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "meclab/domain.hpp"

namespace meclab {

/// No integer spreading factor up to kSpreadingCap meets the coverage target.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr long kSpreadingCap = 1L << 20;

/// Interference exponent of the connectivity probability at spreading factor
/// g (continuous, g > 0).
double xi(const NetworkConfig& cfg, double g);

/// (1 - exp(-xi)) / xi, with a Taylor branch for tiny xi.
double connectivity_from_xi(double x);
double connectivity_probability(const NetworkConfig& cfg, double g);

/// Largest xi still meeting p_c >= 1 - eps.
double coverage_threshold_f(double epsilon);

/// Maximizer of xi(g). Zero when gen_prob == 1 (xi is then decreasing).
double xi_peak_g0(const NetworkConfig& cfg);

struct SpreadingSolution {
  double g0 = 0.0;
  double xi_at_g0 = 0.0;
  double f_eps = 0.0;
  bool unconstrained = false;
  std::optional<double> g_a;
  std::optional<double> g_b;
  bool s1_nonempty = false;
  long g_star = 1;

  /// Continuous relaxation of the optimum: 1 when G = 1 is feasible, else g_b.
  double continuous_g_star() const;
};

SpreadingSolution solve_spreading(const NetworkConfig& cfg);

/// Expected buffer wait plus frame transmission, in slots, for a frame of
/// `frame_slots` slots (need not be an integer).
double comm_latency_for_frame(double gen_prob, double frame_slots);
double comm_latency(const NetworkConfig& cfg, double g);

struct MinCommLatency {
  long g_star = 1;
  double slots = 0.0;
  SpreadingSolution spreading;
};

MinCommLatency min_comm_latency(const NetworkConfig& cfg);

/// Closed-form g_b for a dense network (xi's generation factor taken as 1,
/// F(eps) ~ 2 eps).
double dense_g_b_approx(const NetworkConfig& cfg);
/// 2 g T_min - 1/p.
double dense_comm_latency_approx(const NetworkConfig& cfg, double g_b);

}  // namespace meclab

#endif
