#include "meclab/ran_analytic.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "meclab/numerics.hpp"

namespace meclab {

namespace {

// Fraction of a frame of `frame_slots` slots that holds at least one task.
double frame_occupancy(double gen_prob, double frame_slots) {
  return -std::expm1(frame_slots * std::log1p(-gen_prob));
}

double xi_with(const NetworkConfig& cfg, double tmin, double g) {
  const double scale = 2.0 * (1.0 - cfg.delta) * std::log(1.0 / cfg.delta) / cfg.alpha *
                       beta_alpha(cfg.alpha) * (cfg.lambda_m / cfg.lambda_b);
  return scale * frame_occupancy(cfg.gen_prob, g * tmin) * std::pow(cfg.theta / g, 2.0 / cfg.alpha);
}

}  // namespace

double xi(const NetworkConfig& cfg, double g) {
  if (!(g > 0.0)) throw DomainError("xi: spreading factor must be positive");
  return xi_with(cfg, derive_basics(cfg).tmin_slots, g);
}

double connectivity_from_xi(double x) {
  if (x < 1e-8) return 1.0 - x / 2.0 + x * x / 6.0;
  return -std::expm1(-x) / x;
}

double connectivity_probability(const NetworkConfig& cfg, double g) {
  return connectivity_from_xi(xi(cfg, g));
}

double coverage_threshold_f(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("coverage_threshold_f: epsilon outside (0,1)");
  const double inv = 1.0 / (1.0 - epsilon);
  double x = lambert_w(-std::exp(-inv) * inv, Branch::Principal) + inv;
  // Newton polish on (1 - e^-x)/x = 1 - eps; the W form cancels as eps -> 0.
  if (!(x > 0.0) || !std::isfinite(x)) x = 2.0 * epsilon;
  for (int i = 0; i < 4; ++i) {
    const double em1 = -std::expm1(-x);
    const double h = em1 / x - (1.0 - epsilon);
    const double dh = (x * std::exp(-x) - em1) / (x * x);
    if (dh == 0.0) break;
    x -= h / dh;
  }
  return x;
}

double xi_peak_g0(const NetworkConfig& cfg) {
  if (cfg.gen_prob >= 1.0) return 0.0;
  const double tmin = derive_basics(cfg).tmin_slots;
  const double a = 2.0 / cfg.alpha;
  const double w = lambert_w(-a * std::exp(-a), Branch::LowerMinusOne);
  return (cfg.alpha * w + 2.0) / (cfg.alpha * tmin * std::log1p(-cfg.gen_prob));
}

double SpreadingSolution::continuous_g_star() const {
  if (unconstrained || s1_nonempty || !g_b) return 1.0;
  return std::max(1.0, *g_b);
}

SpreadingSolution solve_spreading(const NetworkConfig& cfg) {
  const double tmin = derive_basics(cfg).tmin_slots;
  SpreadingSolution sol;
  sol.f_eps = coverage_threshold_f(cfg.epsilon);
  sol.g0 = xi_peak_g0(cfg);
  sol.xi_at_g0 = sol.g0 > 0.0 ? xi_with(cfg, tmin, sol.g0) : std::numeric_limits<double>::infinity();
  if (cfg.lambda_m == 0.0 || sol.xi_at_g0 <= sol.f_eps) {
    sol.unconstrained = true;
    sol.g_star = 1;
    return sol;
  }

  auto excess = [&](double g) { return xi_with(cfg, tmin, g) - sol.f_eps; };
  const double cap = static_cast<double>(kSpreadingCap);

  if (sol.g0 > 0.0) {
    const double lo = sol.g0 * 1e-12;
    if (excess(lo) > 0.0) {
      sol.g_a = lo;
    } else {
      const auto roots = find_roots_bracketed(excess, lo, sol.g0);
      sol.g_a = roots.empty() ? lo : roots.front();
    }
  }
  const double b_lo = sol.g0 > 0.0 ? sol.g0 : 1e-12;
  if (excess(cap) > 0.0) {
    throw InfeasibleError(fmt::format(
        "no spreading factor up to {} meets the coverage target (xi(cap) = {:.6g} > F = {:.6g})",
        kSpreadingCap, excess(cap) + sol.f_eps, sol.f_eps));
  }
  const auto roots = find_roots_bracketed(excess, b_lo, cap);
  sol.g_b = roots.empty() ? b_lo : roots.back();

  sol.s1_nonempty = sol.g_a && std::floor(*sol.g_a) >= 1.0;
  if (sol.s1_nonempty) {
    sol.g_star = 1;
  } else {
    sol.g_star = std::max(1L, static_cast<long>(std::ceil(*sol.g_b)));
    while (connectivity_from_xi(xi_with(cfg, tmin, static_cast<double>(sol.g_star))) <
           1.0 - cfg.epsilon) {
      if (++sol.g_star > kSpreadingCap) {
        throw InfeasibleError("coverage re-check failed up to the spreading cap");
      }
    }
  }
  return sol;
}

double comm_latency_for_frame(double gen_prob, double frame_slots) {
  return frame_slots + frame_slots / frame_occupancy(gen_prob, frame_slots) - 1.0 / gen_prob;
}

double comm_latency(const NetworkConfig& cfg, double g) {
  if (!(g >= 1.0)) throw DomainError("comm_latency: spreading factor must be >= 1");
  return comm_latency_for_frame(cfg.gen_prob, g * derive_basics(cfg).tmin_slots);
}

MinCommLatency min_comm_latency(const NetworkConfig& cfg) {
  MinCommLatency out;
  out.spreading = solve_spreading(cfg);
  out.g_star = out.spreading.g_star;
  out.slots = comm_latency(cfg, static_cast<double>(out.g_star));
  return out;
}

double dense_g_b_approx(const NetworkConfig& cfg) {
  const double inner = (1.0 - cfg.delta) * std::log(1.0 / cfg.delta) * beta_alpha(cfg.alpha) /
                       (cfg.alpha * cfg.epsilon) * (cfg.lambda_m / cfg.lambda_b);
  return std::pow(inner, cfg.alpha / 2.0) * cfg.theta;
}

double dense_comm_latency_approx(const NetworkConfig& cfg, double g_b) {
  return 2.0 * g_b * derive_basics(cfg).tmin_slots - 1.0 / cfg.gen_prob;
}

}  // namespace meclab
