#include "meclab/simulator.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "meclab/numerics.hpp"

namespace meclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum Stream : std::uint64_t {
  kSpatial = 11,
  kAsyncArrivals = 12,
  kSyncArrivals = 13,
  kSynthetic = 14,
  kServer = 15,
};

std::mt19937_64 stream(std::uint64_t seed, Stream s, std::uint64_t index = 0) {
  return std::mt19937_64(mix_seed(mix_seed(seed, s), index));
}

double unit(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double occupancy(double gen_prob, double frame_slots) {
  return -std::expm1(frame_slots * std::log1p(-gen_prob));
}

// Slot (1-based) of the first generation in a frame of `frame` slots, given
// that one happened.
long first_generation_slot(std::mt19937_64& rng, double p, long frame) {
  if (p >= 1.0) return 1;
  const double u = unit(rng);
  const double k = std::ceil(std::log1p(u * std::expm1(static_cast<double>(frame) * std::log1p(-p))) /
                             std::log1p(-p));
  return std::clamp(static_cast<long>(k), 1L, frame);
}

// Buffer wait until the frame end plus one frame on the air.
double comm_latency_sample(std::mt19937_64& rng, double p, long frame) {
  return static_cast<double>(2 * frame - first_generation_slot(rng, p, frame));
}

}  // namespace

bool Realization::is_central(const Point& p) const {
  const double lo = 0.25 * window_side;
  const double hi = 0.75 * window_side;
  return p.x >= lo && p.x < hi && p.y >= lo && p.y < hi;
}

std::vector<int> Realization::central_aps() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < aps.size(); ++i) {
    if (is_central(aps[i])) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> Realization::central_associated_mobiles() const {
  std::vector<int> out;
  for (std::size_t j = 0; j < mobiles.size(); ++j) {
    if (association[j] >= 0 && is_central(mobiles[j])) out.push_back(static_cast<int>(j));
  }
  return out;
}

Realization sample_realization(const NetworkConfig& cfg, double window_side, std::uint64_t seed) {
  const DerivedBasics basics = derive_basics(cfg);
  const double r0 = basics.zone_radius;
  if (!(window_side >= kMinWindowFactor * r0)) {
    throw WindowError(fmt::format("window side {} is below {} zone radii ({})", window_side,
                                  kMinWindowFactor, kMinWindowFactor * r0));
  }
  Realization real;
  real.seed = seed;
  real.window_side = window_side;
  real.zone_radius = r0;

  auto rng = stream(seed, kSpatial);
  std::uniform_real_distribution<double> coord(0.0, window_side);
  const double area = window_side * window_side;
  const long n_ap = std::poisson_distribution<long>(cfg.lambda_b * area)(rng);
  const long n_mob = cfg.lambda_m > 0.0 ? std::poisson_distribution<long>(cfg.lambda_m * area)(rng) : 0;
  real.aps.resize(static_cast<std::size_t>(n_ap));
  for (auto& p : real.aps) p = {coord(rng), coord(rng)};
  real.mobiles.resize(static_cast<std::size_t>(n_mob));
  for (auto& p : real.mobiles) p = {coord(rng), coord(rng)};
  real.fading.resize(real.mobiles.size());
  real.activity_draw.resize(real.mobiles.size());
  std::exponential_distribution<double> expo(1.0);
  for (std::size_t j = 0; j < real.mobiles.size(); ++j) {
    real.fading[j] = expo(rng);
    real.activity_draw[j] = unit(rng);
  }

  // Bucket APs into cells at least r0 wide so coverage needs only 3x3 cells.
  const long cells = std::max(1L, static_cast<long>(std::floor(window_side / r0)));
  const double cell = window_side / static_cast<double>(cells);
  auto cell_of = [&](double v) { return std::min(cells - 1, static_cast<long>(v / cell)); };
  std::vector<std::vector<int>> bucket(static_cast<std::size_t>(cells * cells));
  for (std::size_t i = 0; i < real.aps.size(); ++i) {
    const auto& p = real.aps[i];
    bucket[static_cast<std::size_t>(cell_of(p.y) * cells + cell_of(p.x))].push_back(static_cast<int>(i));
  }
  real.association.assign(real.mobiles.size(), -1);
  const double r2 = r0 * r0;
  std::vector<int> cover;
  for (std::size_t j = 0; j < real.mobiles.size(); ++j) {
    const auto& m = real.mobiles[j];
    const long cx = cell_of(m.x);
    const long cy = cell_of(m.y);
    cover.clear();
    for (long dy = -1; dy <= 1; ++dy) {
      for (long dx = -1; dx <= 1; ++dx) {
        const long bx = (cx + dx + cells) % cells;
        const long by = (cy + dy + cells) % cells;
        for (int ap : bucket[static_cast<std::size_t>(by * cells + bx)]) {
          if (torus_dist2(m, real.aps[static_cast<std::size_t>(ap)], window_side) <= r2) cover.push_back(ap);
        }
      }
    }
    if (cover.empty()) continue;
    std::sort(cover.begin(), cover.end());
    const auto pick = std::uniform_int_distribution<std::size_t>(0, cover.size() - 1)(rng);
    real.association[j] = cover[pick];
  }
  return real;
}

long sim_frame_slots(const NetworkConfig& cfg, double g) {
  const double exact = g * derive_basics(cfg).tmin_slots;
  return std::max(1L, static_cast<long>(std::ceil(exact * (1.0 - 1e-12))));
}

SirResult evaluate_sir(const Realization& real, const NetworkConfig& cfg, double g,
                       InterfererModel model, Exec exec, bool all) {
  const std::size_t n = real.mobiles.size();
  SirResult out;
  out.sir.assign(n, 0.0);
  out.active.assign(n, 0);
  out.connected.assign(n, 0);
  if (n == 0) return out;

  const double tmin = derive_basics(cfg).tmin_slots;
  const double p_frame = occupancy(cfg.gen_prob, static_cast<double>(sim_frame_slots(cfg, g)));
  const double p_iid = (1.0 - cfg.delta) * occupancy(cfg.gen_prob, g * tmin);
  std::vector<double> weight(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const bool on = model == InterfererModel::BufferState
                        ? real.association[j] >= 0 && real.activity_draw[j] < p_frame
                        : real.activity_draw[j] < p_iid;
    out.active[j] = on ? 1 : 0;
    if (on) weight[j] = cfg.tx_power * real.fading[j];
  }

  // Mobiles whose SIR we need: central ones plus everyone served by a central AP.
  std::vector<char> ap_needed(real.aps.size(), 0);
  std::vector<int> scope;
  for (std::size_t j = 0; j < n; ++j) {
    const int a = real.association[j];
    if (a < 0) continue;
    if (all || real.is_central(real.mobiles[j]) || real.is_central(real.aps[static_cast<std::size_t>(a)])) {
      scope.push_back(static_cast<int>(j));
      ap_needed[static_cast<std::size_t>(a)] = 1;
    }
  }
  std::vector<int> targets;
  std::vector<int> slot_of(real.aps.size(), -1);
  for (std::size_t i = 0; i < real.aps.size(); ++i) {
    if (ap_needed[i]) {
      slot_of[i] = static_cast<int>(targets.size());
      targets.push_back(static_cast<int>(i));
    }
  }
  std::vector<std::vector<int>> cell_members(targets.size());
  for (std::size_t j = 0; j < n; ++j) {
    const int a = real.association[j];
    if (a >= 0 && slot_of[static_cast<std::size_t>(a)] >= 0) {
      cell_members[static_cast<std::size_t>(slot_of[static_cast<std::size_t>(a)])].push_back(static_cast<int>(j));
    }
  }

  const InterferenceField field{real.aps, real.mobiles, weight, real.association, cfg.alpha, real.window_side};
  std::vector<double> far(targets.size(), 0.0);
  if (exec == Exec::Parallel) interference_at_aps_parallel(field, targets, far);
  else interference_at_aps_serial(field, targets, far);

  for (int jj : scope) {
    const auto j = static_cast<std::size_t>(jj);
    const int a = real.association[j];
    const auto slot = static_cast<std::size_t>(slot_of[static_cast<std::size_t>(a)]);
    const Point& y = real.aps[static_cast<std::size_t>(a)];
    double interference = far[slot];
    for (int kk : cell_members[slot]) {
      const auto k = static_cast<std::size_t>(kk);
      if (k == j || weight[k] == 0.0) continue;
      interference += weight[k] * path_gain(torus_dist2(y, real.mobiles[k], real.window_side), cfg.alpha);
    }
    const double signal = cfg.tx_power * real.fading[j] * path_gain(torus_dist2(y, real.mobiles[j], real.window_side), cfg.alpha);
    out.sir[j] = interference > 0.0 ? g * signal / interference : kInf;
    out.connected[j] = out.sir[j] >= cfg.theta ? 1 : 0;
  }
  return out;
}

std::optional<double> connected_fraction(const Realization& real, const SirResult& sir) {
  const auto central = real.central_associated_mobiles();
  if (central.empty()) return std::nullopt;
  long hits = 0;
  for (int j : central) hits += sir.connected[static_cast<std::size_t>(j)];
  return static_cast<double>(hits) / static_cast<double>(central.size());
}

StabilityClassification classify_stability(const Realization& real, const SirResult& sir,
                                           const NetworkConfig& cfg, const TrafficRates& rates,
                                           const VmPolicy& vm) {
  StabilityClassification cls;
  cls.aps = real.central_aps();
  std::vector<int> slot_of(real.aps.size(), -1);
  for (std::size_t k = 0; k < cls.aps.size(); ++k) slot_of[static_cast<std::size_t>(cls.aps[k])] = static_cast<int>(k);
  cls.served.resize(cls.aps.size());
  for (std::size_t j = 0; j < real.mobiles.size(); ++j) {
    const int a = real.association[j];
    if (a < 0 || !sir.connected[j]) continue;
    const int slot = slot_of[static_cast<std::size_t>(a)];
    if (slot >= 0) cls.served[static_cast<std::size_t>(slot)].push_back(static_cast<int>(j));
  }
  const double mu_slot = vm.mu_max * cfg.slot_sec;
  cls.stable.resize(cls.aps.size());
  long loaded = 0;
  long loaded_stable = 0;
  for (std::size_t k = 0; k < cls.aps.size(); ++k) {
    const auto nn = static_cast<double>(cls.served[k].size());
    const bool ok = nn * rates.beta_star < mu_slot;
    cls.stable[k] = ok ? 1 : 0;
    if (nn >= 1.0) {
      ++loaded;
      loaded_stable += ok ? 1 : 0;
    }
  }
  if (loaded > 0) cls.fraction = static_cast<double>(loaded_stable) / static_cast<double>(loaded);
  return cls;
}

ComputeServer::ComputeServer(const VmPolicy& vm, std::uint64_t seed, double window_lo, double window_hi)
    : vm_(vm), rng_(seed), window_lo_(window_lo), window_hi_(window_hi) {}

void ComputeServer::accumulate(double t_next) {
  const double lo = std::max(clock_, window_lo_);
  const double hi = std::min(t_next, window_hi_);
  if (hi > lo) area_ += static_cast<double>(queue_.size()) * (hi - lo);
}

void ComputeServer::check_policy() {
  if (in_service_ != vm_.vm_count(in_system())) ++policy_violations_;
}

void ComputeServer::arrive(double t, long count) {
  accumulate(t);
  clock_ = t;
  for (long i = 0; i < count; ++i) queue_.push_back({t, kInf, kInf});
  while (in_service_ < vm_.vm_count(in_system())) {
    queue_[static_cast<std::size_t>(in_service_)].start = clock_;
    ++in_service_;
  }
  check_policy();
}

long ComputeServer::advance_until(double t_end) {
  long done = 0;
  while (!queue_.empty()) {
    const double rate = vm_.rate(in_system());
    const double t_next = clock_ + std::exponential_distribution<double>(rate)(rng_);
    if (t_next > t_end) break;
    accumulate(t_next);
    clock_ = t_next;
    const auto pick = std::uniform_int_distribution<long>(0, in_service_ - 1)(rng_);
    TaskRecord rec = queue_[static_cast<std::size_t>(pick)];
    rec.completion = clock_;
    finished_.push_back(rec);
    queue_.erase(queue_.begin() + pick);
    --in_service_;
    while (in_service_ < vm_.vm_count(in_system())) {
      queue_[static_cast<std::size_t>(in_service_)].start = clock_;
      ++in_service_;
    }
    check_policy();
    ++done;
  }
  if (std::isfinite(t_end)) {
    accumulate(t_end);
    clock_ = t_end;
  }
  return done;
}

void ComputeServer::drain() { advance_until(kInf); }

HorizonPlan plan_horizon(long frame_slots, double horizon_slots, long min_frames, double warmup_fraction) {
  if (frame_slots < 1 || !(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
    throw DomainError("plan_horizon: need frame >= 1 and warmup fraction in [0, 1)");
  }
  HorizonPlan plan;
  plan.frame_slots = frame_slots;
  plan.horizon_slots = std::max(horizon_slots, static_cast<double>(min_frames * frame_slots));
  plan.warmup_slots = warmup_fraction * plan.horizon_slots;
  return plan;
}

namespace {

CsResult serve(const VmPolicy& vm, std::uint64_t seed, const std::vector<double>& arrivals_sec,
               double lo_sec, double hi_sec) {
  ComputeServer srv(vm, seed, lo_sec, hi_sec);
  for (double t : arrivals_sec) {
    srv.advance_until(t);
    srv.arrive(t);
  }
  srv.drain();
  CsResult res;
  for (const auto& rec : srv.finished()) {
    if (rec.arrival >= lo_sec && rec.arrival < hi_sec) {
      ++res.tasks;
      res.latency_sum += rec.completion - rec.arrival;
    }
  }
  res.area = srv.area();
  res.window_sec = hi_sec - lo_sec;
  res.policy_violations = srv.policy_violations();
  return res;
}

std::vector<double> synthetic_arrivals(std::mt19937_64& rng, ArrivalSource source, double rate_per_slot,
                                       double horizon_slots) {
  std::vector<double> out;
  if (!(rate_per_slot > 0.0)) return out;
  if (source == ArrivalSource::Periodic) {
    const double gap = 1.0 / rate_per_slot;
    for (double t = gap * unit(rng); t < horizon_slots; t += gap) out.push_back(t);
    return out;
  }
  std::exponential_distribution<double> gap(rate_per_slot);
  for (double t = gap(rng); t < horizon_slots; t += gap(rng)) out.push_back(t);
  return out;
}

}  // namespace

ModeRun run_async(const Realization& real, const StabilityClassification& cls,
                  const NetworkConfig& cfg, double g_star, const HorizonPlan& plan,
                  ArrivalSource source) {
  const long frame = plan.frame_slots;
  const auto frame_d = static_cast<double>(frame);
  const double p = cfg.gen_prob;
  const double pl = occupancy(p, frame_d);
  const VmPolicy vm = vm_policy(cfg.comp_sec, cfg.degrade);
  const double h = plan.horizon_slots;
  const double w = plan.warmup_slots;
  (void)g_star;

  ModeRun run;
  double arrivals_total = 0.0;
  for (std::size_t k = 0; k < cls.aps.size(); ++k) {
    const auto ap = static_cast<std::uint64_t>(cls.aps[k]);
    auto rng = stream(real.seed, kAsyncArrivals, ap);
    std::vector<double> slots;
    for (int mob : cls.served[k]) {
      const double phase = frame_d * unit(rng);
      // Occupancy is checked at each frame end e_j; the task lands at e_{j+1}.
      for (long j = 0;; ++j) {
        const double land = phase + static_cast<double>(j + 1) * frame_d;
        if (land >= h) break;
        const bool full = j == 0 ? real.activity_draw[static_cast<std::size_t>(mob)] < pl : unit(rng) < pl;
        if (!full) continue;
        const double lat = comm_latency_sample(rng, p, frame);
        if (land >= w) {
          run.comm_latency_sum += lat;
          ++run.comm_tasks;
        }
        slots.push_back(land);
      }
    }
    std::sort(slots.begin(), slots.end());
    arrivals_total += static_cast<double>(std::count_if(slots.begin(), slots.end(), [w](double t) { return t >= w; }));

    const auto nn = static_cast<long>(cls.served[k].size());
    if (nn == 0 || !cls.stable[k]) continue;
    if (source != ArrivalSource::Superposed) {
      auto syn = stream(real.seed, kSynthetic, ap);
      slots = synthetic_arrivals(syn, source, static_cast<double>(nn) * pl / frame_d, h);
    }
    std::vector<double> secs(slots.size());
    std::transform(slots.begin(), slots.end(), secs.begin(), [&](double t) { return t * cfg.slot_sec; });
    CsResult res = serve(vm, mix_seed(mix_seed(real.seed, kServer), ap), secs, w * cfg.slot_sec, h * cfg.slot_sec);
    res.ap = cls.aps[k];
    res.mobiles = nn;
    run.servers.push_back(res);
  }
  if (!cls.aps.empty()) {
    run.arrivals_per_cs_slot = arrivals_total / (h - w) / static_cast<double>(cls.aps.size());
  }
  return run;
}

ModeRun run_sync(const Realization& real, const StabilityClassification& cls,
                 const NetworkConfig& cfg, double g_star, const HorizonPlan& plan) {
  const long frame = plan.frame_slots;
  const auto frame_d = static_cast<double>(frame);
  const double p = cfg.gen_prob;
  const double pl = occupancy(p, frame_d);
  const VmPolicy vm = vm_policy(cfg.comp_sec, cfg.degrade);
  const long frames = static_cast<long>(std::ceil(plan.horizon_slots / frame_d));
  const long warm = static_cast<long>(std::floor(plan.warmup_slots / frame_d));
  const double frame_sec = frame_d * cfg.slot_sec;
  (void)g_star;

  ModeRun run;
  double arrivals_total = 0.0;
  std::vector<long> batch(static_cast<std::size_t>(frames));
  for (std::size_t k = 0; k < cls.aps.size(); ++k) {
    const auto ap = static_cast<std::uint64_t>(cls.aps[k]);
    auto rng = stream(real.seed, kSyncArrivals, ap);
    std::fill(batch.begin(), batch.end(), 0L);
    for (int mob : cls.served[k]) {
      for (long t = 0; t < frames; ++t) {
        const bool full = t == 0 ? real.activity_draw[static_cast<std::size_t>(mob)] < pl : unit(rng) < pl;
        if (!full) continue;
        ++batch[static_cast<std::size_t>(t)];
        const double lat = comm_latency_sample(rng, p, frame);
        if (t >= warm) {
          run.comm_latency_sum += lat;
          ++run.comm_tasks;
        }
      }
    }
    for (long t = warm; t < frames; ++t) arrivals_total += static_cast<double>(batch[static_cast<std::size_t>(t)]);

    const auto nn = static_cast<long>(cls.served[k].size());
    if (nn == 0 || !cls.stable[k]) continue;
    const double lo = static_cast<double>(warm) * frame_sec;
    const double hi = static_cast<double>(frames) * frame_sec;
    ComputeServer srv(vm, mix_seed(mix_seed(real.seed, kServer), ap), lo, hi);
    long q_prev = 0;
    long c_prev = 0;
    for (long t = 0; t < frames; ++t) {
      const long a = batch[static_cast<std::size_t>(t)];
      const double start = static_cast<double>(t) * frame_sec;
      if (a > 0) srv.arrive(start, a);
      const long q = srv.in_system();
      if (t > 0) {
        ++run.bookkeeping_frames;
        if (q != std::max(q_prev + a - c_prev, 0L)) ++run.bookkeeping_violations;
      }
      c_prev = srv.advance_until(static_cast<double>(t + 1) * frame_sec);
      q_prev = q;
    }
    srv.drain();
    CsResult res;
    res.ap = cls.aps[k];
    res.mobiles = nn;
    for (const auto& rec : srv.finished()) {
      if (rec.arrival >= lo && rec.arrival < hi) {
        ++res.tasks;
        res.latency_sum += rec.completion - rec.arrival;
      }
    }
    res.area = srv.area();
    res.window_sec = hi - lo;
    res.policy_violations = srv.policy_violations();
    run.servers.push_back(res);
  }
  if (!cls.aps.empty() && frames > warm) {
    run.arrivals_per_cs_slot =
        arrivals_total / (static_cast<double>(frames - warm) * frame_d) / static_cast<double>(cls.aps.size());
  }
  return run;
}

std::optional<double> cs_mean_latency(const ModeRun& run) {
  double sum = 0.0;
  long count = 0;
  for (const auto& cs : run.servers) {
    if (cs.tasks == 0) continue;
    sum += cs.mean_latency();
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::optional<double> poisson_approx_check(const Realization& real, const StabilityClassification& cls,
                                           const NetworkConfig& cfg, double g_star,
                                           const HorizonPlan& plan, ArrivalSource reference) {
  const auto a = cs_mean_latency(run_async(real, cls, cfg, g_star, plan, ArrivalSource::Superposed));
  const auto b = cs_mean_latency(run_async(real, cls, cfg, g_star, plan, reference));
  if (!a || !b) return std::nullopt;
  return (*a - *b) / *b;
}

RealizationMetrics simulate_realization(const NetworkConfig& cfg, double g_star, const SimOptions& opts,
                                        std::uint64_t seed, Exec exec) {
  const DerivedBasics basics = derive_basics(cfg);
  const Realization real = sample_realization(cfg, opts.window_factor * basics.zone_radius, seed);
  const SirResult sir = evaluate_sir(real, cfg, g_star, opts.interferers, exec);
  RealizationMetrics m;
  m.connectivity = connected_fraction(real, sir);

  const TrafficRates rates = traffic_rates(cfg, g_star);
  const VmPolicy vm = vm_policy(cfg.comp_sec, cfg.degrade);
  const StabilityClassification cls = classify_stability(real, sir, cfg, rates, vm);
  m.stability = cls.fraction;
  const HorizonPlan plan = plan_horizon(sim_frame_slots(cfg, g_star), opts.horizon_slots, opts.min_frames,
                                        opts.warmup_fraction);

  auto absorb = [&m, &cls](const ModeRun& run) {
    for (const auto& cs : run.servers) {
      m.little_area += cs.area;
      m.little_latency += cs.latency_sum;
      m.policy_violations += cs.policy_violations;
    }
    m.bookkeeping_frames += run.bookkeeping_frames;
    m.bookkeeping_violations += run.bookkeeping_violations;
    if (!m.comm_latency_slots && run.comm_tasks > 0) {
      m.comm_latency_slots = run.comm_latency_sum / static_cast<double>(run.comm_tasks);
    }
    if (!m.arrival_rate && !cls.aps.empty()) m.arrival_rate = run.arrivals_per_cs_slot;
  };
  if (opts.run_async || opts.poisson_twin) {
    const ModeRun run = run_async(real, cls, cfg, g_star, plan);
    absorb(run);
    m.comp_async_sec = cs_mean_latency(run);
    if (opts.poisson_twin && m.comp_async_sec) {
      const auto ref = cs_mean_latency(run_async(real, cls, cfg, g_star, plan, ArrivalSource::Poisson));
      if (ref) m.poisson_divergence = (*m.comp_async_sec - *ref) / *ref;
    }
  }
  if (opts.run_sync) {
    const ModeRun run = run_sync(real, cls, cfg, g_star, plan);
    absorb(run);
    m.comp_sync_sec = cs_mean_latency(run);
  }
  if (m.comp_async_sec && m.comp_sync_sec) m.async_sync_ratio = *m.comp_async_sec / *m.comp_sync_sec;
  return m;
}

Estimate estimate(std::span<const double> xs) {
  Estimate e;
  e.n = static_cast<long>(xs.size());
  if (e.n == 0) return e;
  e.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(e.n);
  if (e.n < 2) {
    e.half_width = kInf;
    return e;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - e.mean) * (x - e.mean);
  const double sd = std::sqrt(ss / static_cast<double>(e.n - 1));
  e.half_width = 1.959963984540054 * sd / std::sqrt(static_cast<double>(e.n));
  return e;
}

SimStats summarize(std::span<const RealizationMetrics> runs) {
  SimStats s;
  s.realization_count = static_cast<long>(runs.size());
  auto collect = [&](auto field) {
    std::vector<double> xs;
    for (const auto& r : runs) {
      if (const auto& v = r.*field) xs.push_back(*v);
    }
    return estimate(xs);
  };
  s.connectivity_fraction = collect(&RealizationMetrics::connectivity);
  s.stability_fraction = collect(&RealizationMetrics::stability);
  s.mean_comm_latency_slots = collect(&RealizationMetrics::comm_latency_slots);
  s.mean_comp_latency_async_sec = collect(&RealizationMetrics::comp_async_sec);
  s.mean_comp_latency_sync_sec = collect(&RealizationMetrics::comp_sync_sec);
  s.arrival_rate_empirical = collect(&RealizationMetrics::arrival_rate);
  s.poisson_divergence = collect(&RealizationMetrics::poisson_divergence);
  s.async_sync_ratio = collect(&RealizationMetrics::async_sync_ratio);
  for (const auto& r : runs) {
    s.little_area += r.little_area;
    s.little_latency += r.little_latency;
    s.bookkeeping_frames += r.bookkeeping_frames;
    s.bookkeeping_violations += r.bookkeeping_violations;
    s.policy_violations += r.policy_violations;
  }
  return s;
}

std::uint64_t realization_seed(std::uint64_t seed, long r) {
  return mix_seed(seed, static_cast<std::uint64_t>(r) + 0x5eedULL);
}

std::vector<RealizationMetrics> run_monte_carlo_serial(const MonteCarloJob& job) {
  return map_realizations(job.realizations, job.seed, Exec::Serial, [&job](std::uint64_t s) {
    return simulate_realization(job.cfg, job.g_star, job.opts, s);
  });
}

std::vector<RealizationMetrics> run_monte_carlo_parallel(const MonteCarloJob& job) {
  return map_realizations(job.realizations, job.seed, Exec::Parallel, [&job](std::uint64_t s) {
    return simulate_realization(job.cfg, job.g_star, job.opts, s);
  });
}

}  // namespace meclab
