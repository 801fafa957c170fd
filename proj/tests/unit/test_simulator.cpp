#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "meclab/kernels.hpp"
#include "meclab/numerics.hpp"
#include "meclab/ran_analytic.hpp"
#include "meclab/simulator.hpp"

using namespace meclab;

namespace {

double side_for(const NetworkConfig& c, double factor = 20.0) { return factor * derive_basics(c).zone_radius; }

double mean_latency(const std::vector<TaskRecord>& recs, double lo, double hi) {
  double sum = 0.0;
  long n = 0;
  for (const auto& r : recs) {
    if (r.arrival >= lo && r.arrival < hi) {
      sum += r.completion - r.arrival;
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

}  // namespace

TEST_CASE("realizations are reproducible from their seed") {
  const NetworkConfig c;
  const auto a = sample_realization(c, side_for(c), 42);
  const auto b = sample_realization(c, side_for(c), 42);
  const auto other = sample_realization(c, side_for(c), 43);
  REQUIRE(a.aps.size() == b.aps.size());
  REQUIRE(a.mobiles.size() == b.mobiles.size());
  for (std::size_t i = 0; i < a.mobiles.size(); ++i) {
    CHECK(a.mobiles[i].x == b.mobiles[i].x);
    CHECK(a.fading[i] == b.fading[i]);
    CHECK(a.association[i] == b.association[i]);
  }
  CHECK((other.mobiles.size() != a.mobiles.size() || other.mobiles[0].x != a.mobiles[0].x));
}

TEST_CASE("window must span at least ten zone radii") {
  const NetworkConfig c;
  CHECK_THROWS_AS(sample_realization(c, side_for(c, 9.0), 1), WindowError);
  CHECK_NOTHROW(sample_realization(c, side_for(c, 10.0), 1));
}

TEST_CASE("no mobiles means no connectivity estimate") {
  NetworkConfig c;
  c.lambda_m = 0.0;
  const auto real = sample_realization(c, side_for(c), 7);
  CHECK(real.mobiles.empty());
  const auto sir = evaluate_sir(real, c, 10.0, InterfererModel::BufferState);
  CHECK_FALSE(connected_fraction(real, sir).has_value());
  const auto m = simulate_realization(c, 1.0, SimOptions{}, 7);
  CHECK_FALSE(m.connectivity.has_value());
}

TEST_CASE("AP counts are Poisson with the configured mean") {
  const NetworkConfig c;
  const double side = side_for(c, 10.0);
  const double mean = c.lambda_b * side * side;
  double sum = 0.0;
  const int n = 1000;
  for (int r = 0; r < n; ++r) sum += static_cast<double>(sample_realization(c, side, mix_seed(5, r)).aps.size());
  CHECK(std::abs(sum / n - mean) < 3.0 * std::sqrt(mean / n));
}

TEST_CASE("association picks a covering AP, or none when none covers") {
  const NetworkConfig c;
  const auto real = sample_realization(c, side_for(c), 11);
  const double r2 = real.zone_radius * real.zone_radius;
  for (std::size_t j = 0; j < real.mobiles.size(); ++j) {
    bool covered = false;
    for (const auto& ap : real.aps) covered = covered || torus_dist2(ap, real.mobiles[j], real.window_side) <= r2;
    if (!covered) {
      CHECK(real.association[j] == -1);
    } else {
      REQUIRE(real.association[j] >= 0);
      CHECK(torus_dist2(real.aps[static_cast<std::size_t>(real.association[j])], real.mobiles[j],
                        real.window_side) <= r2);
    }
  }
}

TEST_CASE("SIR agrees with a brute-force sum, serial and parallel alike") {
  const NetworkConfig c;
  const auto real = sample_realization(c, side_for(c), 21);
  for (auto model : {InterfererModel::BufferState, InterfererModel::IidThinning}) {
    const auto s = evaluate_sir(real, c, 5474.0, model, Exec::Serial);
    const auto p = evaluate_sir(real, c, 5474.0, model, Exec::Parallel);
    CHECK(s.sir == p.sir);
    long checked = 0;
    for (std::size_t j = 0; j < real.mobiles.size(); ++j) {
      if (real.association[j] < 0 || !real.is_central(real.mobiles[j])) continue;
      const Point& y = real.aps[static_cast<std::size_t>(real.association[j])];
      double interference = 0.0;
      for (std::size_t k = 0; k < real.mobiles.size(); ++k) {
        if (k == j || !s.active[k]) continue;
        interference += c.tx_power * real.fading[k] * std::pow(std::sqrt(torus_dist2(y, real.mobiles[k], real.window_side)), -c.alpha);
      }
      const double signal = c.tx_power * real.fading[j] * std::pow(std::sqrt(torus_dist2(y, real.mobiles[j], real.window_side)), -c.alpha);
      const double ref = 5474.0 * signal / interference;
      CHECK(s.sir[j] == doctest::Approx(ref).epsilon(1e-9));
      CHECK(static_cast<bool>(s.connected[j]) == (s.sir[j] >= c.theta));
      ++checked;
    }
    CHECK(checked > 50);
  }
}

TEST_CASE("interference kernels agree bit for bit") {
  const NetworkConfig c;
  const auto real = sample_realization(c, side_for(c), 3);
  std::vector<double> w(real.mobiles.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = j % 3 ? real.fading[j] : 0.0;
  const InterferenceField f{real.aps, real.mobiles, w, real.association, c.alpha, real.window_side};
  std::vector<int> targets(real.aps.size());
  for (std::size_t i = 0; i < targets.size(); ++i) targets[i] = static_cast<int>(i);
  std::vector<double> a(targets.size());
  std::vector<double> b(targets.size());
  interference_at_aps_serial(f, targets, a);
  interference_at_aps_parallel(f, targets, b);
  CHECK(a == b);
  CHECK(path_gain(4.0, 3.0) == doctest::Approx(0.125));
  CHECK(path_gain(4.0, 4.0) == doctest::Approx(0.0625));
  CHECK(path_gain(4.0, 3.5) == doctest::Approx(std::pow(2.0, -3.5)));
}

TEST_CASE("a lone mobile has infinite SIR") {
  const NetworkConfig c;
  Realization real;
  real.window_side = side_for(c);
  real.zone_radius = derive_basics(c).zone_radius;
  real.aps = {{0.5 * real.window_side, 0.5 * real.window_side}};
  real.mobiles = {{0.5 * real.window_side + 1.0, 0.5 * real.window_side}};
  real.fading = {1.0};
  real.activity_draw = {0.0};
  real.association = {0};
  const auto s = evaluate_sir(real, c, 1.0, InterfererModel::BufferState, Exec::Serial, true);
  CHECK(std::isinf(s.sir[0]));
  CHECK(s.connected[0] == 1);
}

TEST_CASE("huge spreading factor connects everyone") {
  const NetworkConfig c;
  const auto real = sample_realization(c, side_for(c), 9);
  const auto s = evaluate_sir(real, c, 1e15, InterfererModel::BufferState);
  REQUIRE(connected_fraction(real, s).has_value());
  CHECK(*connected_fraction(real, s) == 1.0);
}

TEST_CASE("stability classification edge cases") {
  const NetworkConfig base;
  const auto rates = traffic_rates(base, 100.0);
  const NetworkConfig c = with_mu_max(base, 3.5 * rates.beta_star / base.slot_sec);
  const auto vm = vm_policy(c.comp_sec, c.degrade);
  Realization real;
  real.window_side = side_for(c);
  real.zone_radius = derive_basics(c).zone_radius;
  const double mid = 0.5 * real.window_side;
  real.aps = {{mid - 30, mid}, {mid, mid}, {mid + 30, mid}};
  auto add = [&real](int ap, int count) {
    for (int k = 0; k < count; ++k) {
      real.mobiles.push_back({real.aps[static_cast<std::size_t>(ap)].x + 0.1 * (k + 1), real.aps[static_cast<std::size_t>(ap)].y});
      real.association.push_back(ap);
    }
  };
  add(1, 3);
  add(2, 4);
  SirResult sir;
  sir.sir.assign(real.mobiles.size(), 10.0);
  sir.active.assign(real.mobiles.size(), 0);
  sir.connected.assign(real.mobiles.size(), 1);
  const auto cls = classify_stability(real, sir, c, rates, vm);
  REQUIRE(cls.aps.size() == 3);
  CHECK(cls.stable == std::vector<char>{1, 1, 0});
  REQUIRE(cls.fraction.has_value());
  CHECK(*cls.fraction == doctest::Approx(0.5));

  sir.connected.assign(real.mobiles.size(), 0);
  const auto idle = classify_stability(real, sir, c, rates, vm);
  CHECK(idle.stable == std::vector<char>{1, 1, 1});
  CHECK_FALSE(idle.fraction.has_value());
}

TEST_CASE("isolated tasks take T0 on average") {
  const auto vm = vm_policy(0.1, 0.2);
  ComputeServer srv(vm, 99, 0.0, 1e9);
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    srv.advance_until(10.0 * k);
    srv.arrive(10.0 * k);
  }
  srv.drain();
  CHECK(srv.finished().size() == static_cast<std::size_t>(n));
  CHECK(std::abs(mean_latency(srv.finished(), 0.0, 1e9) - 0.1) < 4.0 * 0.1 / std::sqrt(n));
  CHECK(srv.policy_violations() == 0);
}

TEST_CASE("Poisson-fed server matches its birth-death stationary law") {
  const auto vm = vm_policy(0.1, 0.2);
  const double lam = 0.8 * vm.mu_max;
  std::vector<double> weight{1.0};
  double norm = 1.0;
  double mean_n = 0.0;
  for (long n = 1; n < 4000; ++n) {
    weight.push_back(weight.back() * lam / vm.rate(n));
    norm += weight.back();
    mean_n += static_cast<double>(n) * weight.back();
    if (weight.back() < 1e-300) break;
  }
  const double sojourn = mean_n / norm / lam;

  std::mt19937_64 rng(17);
  std::exponential_distribution<double> gap(lam);
  const double horizon = 2e4;
  const double warm = 2e3;
  ComputeServer poisson(vm, 5, warm, horizon);
  for (double t = gap(rng); t < horizon; t += gap(rng)) {
    poisson.advance_until(t);
    poisson.arrive(t);
  }
  poisson.drain();
  const double sim = mean_latency(poisson.finished(), warm, horizon);
  CHECK(sim == doctest::Approx(sojourn).epsilon(0.03));
  CHECK(poisson.area() / (horizon - warm) / lam == doctest::Approx(sim).epsilon(0.03));
  CHECK(poisson.policy_violations() == 0);

  // Negative control: evenly spaced arrivals at the same rate wait visibly less.
  ComputeServer periodic(vm, 5, warm, horizon);
  for (double t = 0.0; t < horizon; t += 1.0 / lam) {
    periodic.advance_until(t);
    periodic.arrive(t);
  }
  periodic.drain();
  CHECK(mean_latency(periodic.finished(), warm, horizon) < 0.8 * sojourn);
}

TEST_CASE("sync runs satisfy the queue recursion at every frame") {
  const NetworkConfig c;
  SimOptions o;
  o.run_sync = true;
  o.run_async = true;
  long frames = 0;
  for (int r = 0; r < 5; ++r) {
    const auto m = simulate_realization(c, 5474.0, o, mix_seed(77, r));
    frames += m.bookkeeping_frames;
    CHECK(m.bookkeeping_violations == 0);
    CHECK(m.policy_violations == 0);
  }
  CHECK(frames > 0);
}

TEST_CASE("horizon plan") {
  const auto p = plan_horizon(38802, 2e4, 100, 0.2);
  CHECK(p.horizon_slots == doctest::Approx(3880200.0));
  CHECK(p.warmup_slots == doctest::Approx(0.2 * 3880200.0));
  CHECK(plan_horizon(10, 2e4, 100, 0.2).horizon_slots == doctest::Approx(2e4));
  CHECK_THROWS_AS(plan_horizon(0, 1.0, 1, 0.2), DomainError);
}

TEST_CASE("estimate") {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const auto e = estimate(xs);
  CHECK(e.mean == doctest::Approx(2.5));
  CHECK(e.half_width == doctest::Approx(1.96 * std::sqrt(5.0 / 3.0) / 2.0));
  const std::vector<double> one{1.0};
  CHECK(std::isinf(estimate(one).half_width));
  CHECK_FALSE(estimate(std::vector<double>{}).defined());
}

TEST_CASE("serial and parallel Monte Carlo agree exactly") {
  MonteCarloJob job;
  job.g_star = static_cast<double>(solve_spreading(job.cfg).g_star);
  job.opts.run_async = true;
  job.opts.run_sync = true;
  job.opts.poisson_twin = true;
  job.realizations = 6;
  job.seed = 123;
  const auto a = run_monte_carlo_serial(job);
  const auto b = run_monte_carlo_parallel(job);
  REQUIRE(a.size() == b.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    CHECK(a[r].connectivity == b[r].connectivity);
    CHECK(a[r].comp_async_sec == b[r].comp_async_sec);
    CHECK(a[r].comp_sync_sec == b[r].comp_sync_sec);
    CHECK(a[r].poisson_divergence == b[r].poisson_divergence);
    CHECK(a[r].little_area == b[r].little_area);
  }
}
