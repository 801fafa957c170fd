#include <doctest.h>

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <numbers>

#include "meclab/numerics.hpp"
#include "meclab/ran_analytic.hpp"
#include "oracles.hpp"

using namespace meclab;

namespace {

double xi_reference(const NetworkConfig& c, double g) {
  const double tmin = c.task_bits / (c.bandwidth_hz * c.slot_sec * std::log2(1.0 + c.theta));
  const double b = boost::math::beta(2.0 / c.alpha, 1.0 - 2.0 / c.alpha);
  return 2.0 * (1.0 - c.delta) * (1.0 - std::pow(1.0 - c.gen_prob, g * tmin)) * std::log(1.0 / c.delta) / c.alpha *
         b * (c.lambda_m / c.lambda_b) * std::pow(c.theta / g, 2.0 / c.alpha);
}

}  // namespace

TEST_CASE("derived basics") {
  NetworkConfig c;
  c.lambda_b = 0.01;
  const auto d = derive_basics(c);
  CHECK(d.zone_radius == doctest::Approx(std::sqrt(std::log(100.0) / (0.01 * std::numbers::pi))).epsilon(1e-14));
  CHECK(d.zone_radius == doctest::Approx(12.1073).epsilon(1e-5));
  CHECK(d.tmin_slots == doctest::Approx(7.088).epsilon(1e-4));
  CHECK(d.mean_mobiles_per_zone == doctest::Approx(c.lambda_m * std::numbers::pi * d.zone_radius * d.zone_radius));

  for (double k : {0.25, 4.0}) {
    NetworkConfig s = c;
    s.lambda_b *= k;
    CHECK(derive_basics(s).zone_radius == doctest::Approx(d.zone_radius / std::sqrt(k)).epsilon(1e-13));
  }
  NetworkConfig wide = c;
  wide.bandwidth_hz *= 2.0;
  CHECK(derive_basics(wide).tmin_slots == doctest::Approx(d.tmin_slots / 2.0).epsilon(1e-14));
  NetworkConfig loose = c;
  loose.delta = 0.999999;
  CHECK(derive_basics(loose).zone_radius < 0.02);
  CHECK(derive_basics(NetworkConfig{}).zone_radius == doctest::Approx(8.5611).epsilon(1e-4));
}

TEST_CASE("theta conversion") {
  CHECK(theta_from_db(10.0) == doctest::Approx(10.0));
  CHECK(theta_from_db(0.0) == 1.0);
  CHECK(theta_from_db(1.0) == doctest::Approx(NetworkConfig{}.theta).epsilon(1e-15));
}

TEST_CASE("validation names every violated field") {
  NetworkConfig c;
  c.alpha = 1.5;
  c.delta = 2.0;
  c.gen_prob = 0.0;
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations().size() == 3);
  }
  CHECK_NOTHROW(NetworkConfig{}.validate());
}

TEST_CASE("xi matches a direct re-evaluation") {
  const NetworkConfig c;
  for (double g : {1.0, 8.0, 100.0, 5474.0}) CHECK(xi(c, g) == doctest::Approx(xi_reference(c, g)).epsilon(1e-12));
  NetworkConfig silent = c;
  silent.lambda_m = 0.0;
  CHECK(xi(silent, 8.0) == 0.0);
  CHECK(connectivity_probability(silent, 8.0) == 1.0);
}

TEST_CASE("connectivity from xi") {
  CHECK(connectivity_from_xi(0.0) == 1.0);
  CHECK(connectivity_from_xi(1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(connectivity_from_xi(1.0) == doctest::Approx(0.63212).epsilon(1e-5));
  CHECK(connectivity_from_xi(1e-10) == doctest::Approx(1.0 - 0.5e-10).epsilon(1e-15));
  CHECK(connectivity_from_xi(1e-7) == doctest::Approx(-std::expm1(-1e-7) / 1e-7).epsilon(1e-15));
}

TEST_CASE("coverage threshold solves (1 - e^-x)/x = 1 - eps") {
  for (double eps : {0.01, 0.05, 0.2, 0.5}) {
    const double ref = oracle::bisect([eps](double x) { return -std::expm1(-x) / x - (1.0 - eps); }, 1e-9, 50.0);
    CHECK(coverage_threshold_f(eps) == doctest::Approx(ref).epsilon(1e-10));
  }
  CHECK(coverage_threshold_f(0.05) == doctest::Approx(0.1034788).epsilon(1e-6));
  CHECK(coverage_threshold_f(0.01) == doctest::Approx(0.02).epsilon(0.05));
  CHECK(coverage_threshold_f(1e-6) / 2e-6 == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(coverage_threshold_f(0.0), DomainError);
  CHECK_THROWS_AS(coverage_threshold_f(1.0), DomainError);
}

TEST_CASE("xi peak location") {
  const NetworkConfig c = oracle::with_tmin(NetworkConfig{}, 1.0);
  const double w = oracle::wm1(-(2.0 / 3.0) * std::exp(-2.0 / 3.0));
  const double ref = (3.0 * w + 2.0) / (3.0 * 1.0 * std::log(0.8));
  CHECK(xi_peak_g0(c) == doctest::Approx(ref).epsilon(1e-10));
  CHECK(xi_peak_g0(c) == doctest::Approx(3.41793).epsilon(1e-5));
  CHECK(xi(c, ref) > xi(c, ref * 0.99));
  CHECK(xi(c, ref) > xi(c, ref * 1.01));

  const NetworkConfig slow = oracle::with_tmin(NetworkConfig{}, 2.0);
  CHECK(xi_peak_g0(slow) == doctest::Approx(xi_peak_g0(c) / 2.0).epsilon(1e-12));

  NetworkConfig always = c;
  always.gen_prob = 1.0;
  CHECK(xi_peak_g0(always) == 0.0);
}

TEST_CASE("xi is unimodal over 1..10 g0") {
  const NetworkConfig c = oracle::with_tmin(NetworkConfig{}, 0.05);
  const double g0 = xi_peak_g0(c);
  REQUIRE(g0 > 5.0);
  int changes = 0;
  double prev = xi(c, 2.0) - xi(c, 1.0);
  for (int g = 2; g < static_cast<int>(10 * g0); ++g) {
    const double d = xi(c, g + 1.0) - xi(c, g);
    if ((d < 0) != (prev < 0)) ++changes;
    prev = d;
  }
  CHECK(changes == 1);
}

TEST_CASE("spreading factor at defaults sits on the upper root") {
  const NetworkConfig c;
  const auto s = solve_spreading(c);
  CHECK_FALSE(s.unconstrained);
  CHECK_FALSE(s.s1_nonempty);
  REQUIRE(s.g_b.has_value());
  CHECK(xi(c, *s.g_b) == doctest::Approx(s.f_eps).epsilon(1e-9));
  CHECK(s.g_star == static_cast<long>(std::ceil(*s.g_b)));
  CHECK(s.g_star == 5474);
  CHECK(connectivity_probability(c, static_cast<double>(s.g_star)) >= 1.0 - c.epsilon);
  CHECK(connectivity_probability(c, static_cast<double>(s.g_star - 1)) < 1.0 - c.epsilon);
  CHECK(dense_g_b_approx(c) == doctest::Approx(*s.g_b).epsilon(0.05));
}

TEST_CASE("sparse networks need no spreading") {
  NetworkConfig c;
  c.lambda_m = 1e-7;
  const auto s = solve_spreading(c);
  CHECK(s.unconstrained);
  CHECK(s.g_star == 1);
  CHECK_FALSE(s.g_a.has_value());
  CHECK(min_comm_latency(c).slots == doctest::Approx(comm_latency(c, 1.0)));
}

TEST_CASE("comm latency") {
  CHECK(comm_latency_for_frame(0.2, 5.0) == doctest::Approx(5.0 + 5.0 / (1.0 - std::pow(0.8, 5.0)) - 5.0));
  CHECK(comm_latency_for_frame(0.2, 5.0) == doctest::Approx(7.43693).epsilon(1e-6));
  CHECK(comm_latency_for_frame(1.0, 1.0) == doctest::Approx(1.0));

  const NetworkConfig c;
  double prev = comm_latency(c, 1.0);
  bool increasing = true;
  for (int g = 2; g <= 1000; ++g) {
    const double v = comm_latency(c, g);
    increasing = increasing && v > prev;
    prev = v;
  }
  CHECK(increasing);

  const auto best = min_comm_latency(c);
  const double gb = *best.spreading.g_b;
  CHECK(best.slots == doctest::Approx(dense_comm_latency_approx(c, gb)).epsilon(0.05));
  CHECK(dense_comm_latency_approx(c, gb) == doctest::Approx(2.0 * gb * derive_basics(c).tmin_slots - 5.0));
}
