#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "meclab/edge_analytic.hpp"
#include "meclab/numerics.hpp"
#include "meclab/ran_analytic.hpp"
#include "meclab/traffic_analytic.hpp"
#include "oracles.hpp"

using namespace meclab;

namespace {

TrafficRates default_rates(const NetworkConfig& c) {
  return traffic_rates(c, static_cast<double>(solve_spreading(c).g_star));
}

double factorial(long n) {
  double f = 1.0;
  for (long k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return f;
}

}  // namespace

TEST_CASE("traffic rates for a five-slot frame") {
  const NetworkConfig c = oracle::with_tmin(NetworkConfig{}, 1.0);
  const auto r = traffic_rates(c, 5.0);
  CHECK(r.frame_slots == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(r.p_l_star == doctest::Approx(0.67232).epsilon(1e-12));
  CHECK(r.beta_star == doctest::Approx(0.134464).epsilon(1e-12));
  CHECK(r.mean_connected_nbar == doctest::Approx(0.99 * 0.95 * 2.5));
  CHECK(r.lambda_bar_star == doctest::Approx(r.mean_connected_nbar * r.beta_star));
  CHECK(r.a_bar_star == doctest::Approx(r.mean_connected_nbar * r.p_l_star));

  CHECK(2.5 * r.beta_star == doctest::Approx(0.33616).epsilon(1e-12));

  const auto one = traffic_rates(c, 1.0);
  CHECK(one.p_l_star == doctest::Approx(0.2));
  CHECK(one.beta_star == doctest::Approx(0.2));
  CHECK(one.beta_star <= c.gen_prob);

  NetworkConfig saturated = c;
  saturated.gen_prob = 1.0;
  CHECK(traffic_rates(saturated, 40.0).beta_star == doctest::Approx(1.0 / 40.0));
  CHECK_THROWS_AS(traffic_rates(c, 0.5), DomainError);
}

TEST_CASE("arrival rate sweep: linear when sparse, single interior maximum") {
  const NetworkConfig c;
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(std::pow(10.0, -3.0 + 4.0 * i / 200.0));
  const auto pts = arrival_rate_sweep(c, grid);
  REQUIRE(pts.size() == grid.size());
  CHECK(pts[1].lambda_bar_star / pts[0].lambda_bar_star == doctest::Approx(grid[1] / grid[0]).epsilon(0.01));
  int changes = 0;
  for (std::size_t i = 2; i < pts.size(); ++i) {
    const double a = pts[i - 1].lambda_bar_star - pts[i - 2].lambda_bar_star;
    const double b = pts[i].lambda_bar_star - pts[i - 1].lambda_bar_star;
    if ((a > 0) != (b > 0)) ++changes;
  }
  CHECK(changes == 1);
  CHECK_THROWS_AS(arrival_rate_sweep(c, {0.2, 0.1}), DomainError);
}

TEST_CASE("vm policy") {
  const auto flat = vm_policy(0.1, std::exp(1.0) - 1.0);
  CHECK(flat.m_max == 1);
  CHECK(flat.mu_max == doctest::Approx(10.0));

  const auto vm = vm_policy(0.1, 0.2);
  CHECK(vm.m_max == 5);
  CHECK(vm.mu_max == doctest::Approx(50.0 * std::pow(1.2, -4.0)).epsilon(1e-14));
  CHECK(vm.mu_max == doctest::Approx(24.1127).epsilon(1e-5));
  CHECK(vm.rate(10) == vm.rate(5));
  CHECK(vm.vm_count(10) == 5);
  CHECK(vm.rate(0) == 0.0);
  for (long m = 1; m <= 12; ++m) CHECK(vm.raw_rate(m) <= vm.mu_max * (1.0 + 1e-14));

  CHECK(vm_policy(0.1, 1e6).m_max == 1);
}

TEST_CASE("single-VM rate is unimodal with its peak at m_max") {
  for (double d : {0.05, 0.2, 1.0}) {
    const auto vm = vm_policy(0.1, d);
    for (long m = 1; m < 3 * vm.m_max + 5; ++m) {
      if (m < vm.m_max) CHECK(vm.raw_rate(m + 1) >= vm.raw_rate(m) * (1.0 - 1e-12));
      else CHECK(vm.raw_rate(m + 1) <= vm.raw_rate(m) * (1.0 + 1e-12));
    }
    CHECK(vm.mu_max == doctest::Approx(vm.raw_rate(vm.m_max)));
  }
}

TEST_CASE("chernoff multiplier at defaults") {
  const NetworkConfig c;
  const auto r = default_rates(c);
  const auto vm = vm_policy(c.comp_sec, c.degrade);
  const auto st = stability_check(c, r, vm);
  const double nbar = 0.99 * 0.95 * 2.5;
  const double arg = -std::log(0.05) / (nbar * std::exp(1.0)) - std::exp(-1.0);
  CHECK(arg == doctest::Approx(0.100836).epsilon(1e-5));
  const double mult = std::exp(oracle::w0(arg) + 1.0);
  CHECK(mult == doctest::Approx(2.980156).epsilon(1e-6));
  CHECK(st.chernoff_multiplier == doctest::Approx(mult).epsilon(1e-12));
  CHECK(st.required_mu == doctest::Approx(mult * r.lambda_bar_star / c.slot_sec).epsilon(1e-12));
  CHECK(st.margin == doctest::Approx(vm.mu_max - st.required_mu));
  CHECK(st.r_capacity == doctest::Approx(vm.mu_max * c.slot_sec / r.beta_star));

  NetworkConfig empty = c;
  empty.lambda_m = 0.0;
  CHECK(stability_check(empty, traffic_rates(empty, 1.0), vm).required_mu == 0.0);
}

TEST_CASE("chernoff condition implies the exact stable probability") {
  const NetworkConfig base;
  const auto r0 = default_rates(base);
  for (double ratio : {0.5, 1.0, 2.5, 6.0, 15.0}) {
    for (double rho : {0.01, 0.05, 0.1, 0.2, 0.4}) {
      for (double slack : {1.0, 1.1, 1.5, 2.0, 4.0}) {
        NetworkConfig c = base;
        c.lambda_m = ratio * c.lambda_b;
        c.rho = rho;
        const auto r = traffic_rates(c, r0.frame_slots / derive_basics(c).tmin_slots);
        const auto vm = vm_policy(c.comp_sec, c.degrade);
        const double need = stability_check(c, r, vm).required_mu;
        const NetworkConfig sized = with_mu_max(c, need * slack);
        const auto vm2 = vm_policy(sized.comp_sec, sized.degrade);
        const auto st = stability_check(sized, r, vm2);
        const long below = static_cast<long>(std::ceil(st.r_capacity)) - 1;
        const double exact = oracle::cdf(r.mean_connected_nbar, below);
        CHECK(exact >= 1.0 - rho);
        CHECK(st.stable_fraction_analytic == doctest::Approx(exact).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("conditional arrival closed form and exact truncated mean") {
  const NetworkConfig base;
  const auto r = default_rates(base);
  const NetworkConfig c = with_mu_max(base, 8.2 * r.beta_star / base.slot_sec);
  const auto vm = vm_policy(c.comp_sec, c.degrade);
  CHECK(stability_check(c, r, vm).r_capacity == doctest::Approx(8.2).epsilon(1e-12));

  const double nbar = r.mean_connected_nbar;
  const auto ca = conditional_arrival(c, r, vm);
  CHECK(ca.pmf_at_floor_r == doctest::Approx(oracle::pmf(nbar, 8)).epsilon(1e-12));
  CHECK(ca.closed_form == doctest::Approx(r.lambda_bar_star * (1.0 - oracle::pmf(nbar, 8) / 0.95)).epsilon(1e-12));
  double num = 0.0;
  double den = 0.0;
  for (long n = 0; n <= 8; ++n) {
    num += n * oracle::pmf(nbar, n);
    den += oracle::pmf(nbar, n);
  }
  CHECK(ca.exact == doctest::Approx(r.beta_star * num / den).epsilon(1e-12));
  CHECK(ca.closed_form <= r.lambda_bar_star);
  CHECK(ca.closed_form >= 0.0);

  const auto wide = conditional_arrival(base, r, vm_policy(base.comp_sec, base.degrade));
  CHECK(wide.closed_form == doctest::Approx(r.lambda_bar_star).epsilon(1e-12));
}

TEST_CASE("erlang c sojourn against closed forms") {
  CHECK(mmc_sojourn(3.0, 5.0, 1) == doctest::Approx(0.5));
  const double mu = 4.0;
  const double lam = 6.0;
  const double rho = lam / (2.0 * mu);
  CHECK(mmc_sojourn(lam, mu, 2) == doctest::Approx(1.0 / (mu * (1.0 - rho * rho))).epsilon(1e-12));
  CHECK(std::isinf(mmc_sojourn(8.0, 4.0, 2)));
  CHECK(mmc_sojourn(0.0, 4.0, 3) == doctest::Approx(0.25));
}

TEST_CASE("async bounds at defaults match direct evaluation") {
  const NetworkConfig c;
  const auto r = default_rates(c);
  const auto vm = vm_policy(c.comp_sec, c.degrade);
  const auto ca = conditional_arrival(c, r, vm);
  const double factor = 1.0 - ca.pmf_at_floor_r / (1.0 - c.rho);
  const double lam = r.lambda_bar_star / c.slot_sec;
  const double m = 5.0;
  const double upper_ref = m / vm.mu_max + std::pow(m / vm.mu_max, 2) * lam / (factorial(4) * 16.0) * factor;
  const auto up = async_comp_upper(c, r, vm);
  CHECK(up.bound_sec == doctest::Approx(upper_ref).epsilon(1e-12));
  CHECK_FALSE(up.single_vm_fallback);
  CHECK(async_comp_lower(c, r, vm) == doctest::Approx(1.0 / (vm.mu_max - lam * factor)).epsilon(1e-12));
  CHECK(async_comp_lower(c, r, vm) <= up.bound_sec);
  CHECK(up.exact_mmm_sec == doctest::Approx(mmc_sojourn(lam * factor, vm.mu_max / 5.0, 5)).epsilon(1e-12));

  NetworkConfig light = c;
  light.lambda_m = 1e-9;
  const auto rl = traffic_rates(light, 1.0);
  CHECK(async_comp_upper(light, rl, vm).bound_sec == doctest::Approx(m / vm.mu_max).epsilon(1e-9));
  CHECK(async_comp_lower(light, rl, vm) == doctest::Approx(1.0 / vm.mu_max).epsilon(1e-9));
}

TEST_CASE("single VM falls back to the M/M/1 sojourn") {
  NetworkConfig c;
  c.degrade = 2.0;
  const auto r = default_rates(c);
  const auto vm = vm_policy(c.comp_sec, c.degrade);
  REQUIRE(vm.m_max == 1);
  const auto up = async_comp_upper(c, r, vm);
  CHECK(up.single_vm_fallback);
  CHECK(up.bound_sec == doctest::Approx(async_comp_lower(c, r, vm)).epsilon(1e-14));
  CHECK(up.bound_sec == doctest::Approx(up.exact_mmm_sec).epsilon(1e-12));
}

namespace {

// Exact light-traffic latency: tasks sorted by completion, each gap drawn at
// the total rate of the VMs still busy, averaged over A ~ Poisson(a) given A > 0.
double light_traffic_enumerated(const VmPolicy& vm, double a) {
  double total = 0.0;
  double mass = 0.0;
  for (long batch = 1; batch <= 80; ++batch) {
    double ln = 0.0;
    double sum = 0.0;
    for (long n = 1; n <= batch; ++n) {
      const long busy = std::min(vm.m_max, batch - n + 1);
      ln += 1.0 / vm.raw_rate(busy);
      sum += ln;
    }
    const double w = oracle::pmf(a, batch);
    total += w * sum / static_cast<double>(batch);
    mass += w;
  }
  return total / mass;
}

}  // namespace

TEST_CASE("light-traffic bounds bracket the enumerated latency") {
  const NetworkConfig c;
  const auto vm = vm_policy(c.comp_sec, c.degrade);
  for (double a : {0.5, 1.0, 2.0, 4.0}) {
    TrafficRates r;
    r.a_bar_star = a;
    const auto [lo, hi] = sync_light_bounds(c, r, vm);
    const double factor = 1.0 + a / (1.0 - std::exp(-a));
    CHECK(lo == doctest::Approx(factor / (2.0 * vm.mu_max)).epsilon(1e-13));
    CHECK(hi == doctest::Approx(factor / (2.0 * vm.raw_rate(1))).epsilon(1e-13));
    const double exact = light_traffic_enumerated(vm, a);
    CHECK(lo <= exact);
    CHECK(exact <= hi);
  }
  TrafficRates tiny;
  tiny.a_bar_star = 1e-10;
  const auto [lo, hi] = sync_light_bounds(c, tiny, vm);
  CHECK(lo == doctest::Approx(1.0 / vm.mu_max).epsilon(1e-9));
  CHECK(hi == doctest::Approx(c.comp_sec).epsilon(1e-9));
  TrafficRates big;
  big.a_bar_star = 200.0;
  CHECK(sync_light_bounds(c, big, vm).second == doctest::Approx(200.0 / (2.0 * vm.raw_rate(1))).epsilon(0.01));
}

TEST_CASE("heavy-traffic latency") {
  const NetworkConfig base;
  const auto r = default_rates(base);
  const NetworkConfig c = with_mu_max(base, 6.5 * r.beta_star / base.slot_sec);
  const auto vm = vm_policy(c.comp_sec, c.degrade);
  const double R = 6.5;
  const double pl = r.p_l_star;
  const double frame_sec = r.frame_slots * c.slot_sec;
  for (long n = 1; n <= 6; ++n) {
    const double ref = (1.0 / pl / (R - n) + 0.5 * (R + 1.0 / pl) / n - 1.0) * frame_sec;
    CHECK(sync_heavy_latency_given_n(c, r, vm, n) == doctest::Approx(ref).epsilon(1e-10));
  }
  CHECK_THROWS_AS(sync_heavy_latency_given_n(c, r, vm, 7), DomainError);
  CHECK_THROWS_AS(sync_heavy_latency_given_n(c, r, vm, 0), DomainError);

  double num = 0.0;
  double den = 0.0;
  for (long n = 1; n <= 6; ++n) {
    num += oracle::pmf(r.mean_connected_nbar, n) * sync_heavy_latency_given_n(c, r, vm, n);
    den += oracle::pmf(r.mean_connected_nbar, n);
  }
  CHECK(sync_heavy_latency(c, r, vm) == doctest::Approx(num / den).epsilon(1e-10));

  const NetworkConfig integer_r = with_mu_max(base, 3.0 * r.beta_star / base.slot_sec);
  const auto vmi = vm_policy(integer_r.comp_sec, integer_r.degrade);
  CHECK_THROWS_AS(sync_heavy_latency_given_n(integer_r, r, vmi, 3), DomainError);
  double inum = 0.0;
  double iden = 0.0;
  for (long n = 1; n <= 2; ++n) {
    inum += oracle::pmf(r.mean_connected_nbar, n) * sync_heavy_latency_given_n(integer_r, r, vmi, n);
    iden += oracle::pmf(r.mean_connected_nbar, n);
  }
  CHECK(sync_heavy_latency(integer_r, r, vmi) == doctest::Approx(inum / iden).epsilon(1e-9));

  const NetworkConfig starved = with_mu_max(base, 0.9 * r.beta_star / base.slot_sec);
  const auto vms = vm_policy(starved.comp_sec, starved.degrade);
  CHECK_THROWS_AS(sync_heavy_latency(starved, r, vms), DomainError);
  CHECK(std::isnan(comp_latency_bounds(starved, r, vms).sync_heavy));
}

namespace {

std::vector<double> comp_outputs(const NetworkConfig& c, const TrafficRates& r) {
  const auto b = comp_latency_bounds(c, r, vm_policy(c.comp_sec, c.degrade));
  return {b.async_lower, b.async_upper, b.async_exact_mmm, b.sync_light_lower, b.sync_light_upper, b.sync_heavy};
}

enum Output { kAsyncLower, kAsyncUpper, kAsyncMmm, kLightLower, kLightUpper, kHeavy };

}  // namespace

TEST_CASE("comp latency grows with T0 and d") {
  const NetworkConfig base;
  const auto r = default_rates(base);
  const std::vector<double> t0_grid{0.02, 0.05, 0.1, 0.2, 0.4};
  const std::vector<double> d_grid{0.05, 0.1, 0.2, 0.4, 1.0};
  for (double d : d_grid) {
    for (std::size_t i = 1; i < t0_grid.size(); ++i) {
      NetworkConfig a = base;
      NetworkConfig b = base;
      a.degrade = b.degrade = d;
      a.comp_sec = t0_grid[i - 1];
      b.comp_sec = t0_grid[i];
      const auto oa = comp_outputs(a, r);
      const auto ob = comp_outputs(b, r);
      for (int k : {kAsyncLower, kAsyncUpper, kAsyncMmm, kLightLower, kLightUpper}) {
        CHECK(ob[static_cast<std::size_t>(k)] >= oa[static_cast<std::size_t>(k)] * (1.0 - 1e-12));
      }
    }
  }
  for (double t0 : t0_grid) {
    for (std::size_t i = 1; i < d_grid.size(); ++i) {
      NetworkConfig a = base;
      NetworkConfig b = base;
      a.comp_sec = b.comp_sec = t0;
      a.degrade = d_grid[i - 1];
      b.degrade = d_grid[i];
      const auto oa = comp_outputs(a, r);
      const auto ob = comp_outputs(b, r);
      for (int k : {kAsyncLower, kLightLower, kLightUpper}) {
        CHECK(ob[static_cast<std::size_t>(k)] >= oa[static_cast<std::size_t>(k)] * (1.0 - 1e-12));
      }
    }
  }
}

TEST_CASE("heavy-traffic latency grows with T0 at a fixed support") {
  const NetworkConfig base;
  const auto r = default_rates(base);
  // mu_max = R beta*, so stepping R down is the same as stepping T0 up.
  double prev = 0.0;
  for (double R : {2.9, 2.7, 2.5, 2.3, 2.1}) {
    const NetworkConfig c = with_mu_max(base, R * r.beta_star / base.slot_sec);
    const double t = comp_outputs(c, r)[kHeavy];
    CHECK(t > prev);
    prev = t;
  }
}

TEST_CASE("where comp latency is not monotone") {
  const NetworkConfig base;
  const auto r = default_rates(base);
  // Far from saturation the heavy expression is dominated by R / (2N) frames,
  // so slower servers give a smaller number.
  NetworkConfig slow = base;
  slow.comp_sec = 0.2;
  CHECK(comp_outputs(slow, r)[kHeavy] < comp_outputs(base, r)[kHeavy]);
  // The empty-queue term m_max / mu_max = T0 (1 + d)^(m_max - 1) jumps down
  // whenever m_max rounds to a smaller count.
  NetworkConfig d1 = base;
  NetworkConfig d2 = base;
  d1.degrade = 0.1;
  d2.degrade = 0.2;
  CHECK(vm_policy(base.comp_sec, 0.1).m_max == 10);
  CHECK(comp_outputs(d2, r)[kAsyncUpper] < comp_outputs(d1, r)[kAsyncUpper]);
}

TEST_CASE("async lower never exceeds async upper across sweeps") {
  for (double lm : {0.005, 0.01, 0.02, 0.035, 0.05, 0.08, 0.1}) {
    for (double p : {0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0}) {
      NetworkConfig c;
      c.lambda_m = lm;
      c.gen_prob = p;
      const auto r = default_rates(c);
      const auto b = comp_latency_bounds(c, r, vm_policy(c.comp_sec, c.degrade));
      CHECK(b.async_lower <= b.async_upper);
      CHECK(b.sync_light_lower <= b.sync_light_upper);
    }
  }
}
