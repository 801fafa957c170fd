#ifndef MECLAB_SIMULATOR_HPP
#define MECLAB_SIMULATOR_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "meclab/domain.hpp"
#include "meclab/edge_analytic.hpp"
#include "meclab/kernels.hpp"
#include "meclab/traffic_analytic.hpp"

namespace meclab {

/// Window too small relative to the service-zone radius.
class WindowError : public std::invalid_argument {
 public:
  explicit WindowError(const std::string& what) : std::invalid_argument(what) {}
};

inline constexpr double kMinWindowFactor = 10.0;

/// One spatial snapshot on a square torus.
struct Realization {
  std::uint64_t seed = 0;
  double window_side = 0.0;
  double zone_radius = 0.0;
  std::vector<Point> aps;
  std::vector<Point> mobiles;
  std::vector<double> fading;         // Exp(1) per mobile
  std::vector<double> activity_draw;  // U(0,1) per mobile, shared across spreading factors
  std::vector<int> association;       // serving AP or -1

  /// Central quarter window [W/4, 3W/4]^2 where statistics are collected.
  bool is_central(const Point& p) const;
  std::vector<int> central_aps() const;
  std::vector<int> central_associated_mobiles() const;
};

Realization sample_realization(const NetworkConfig& cfg, double window_side, std::uint64_t seed);

enum class InterfererModel {
  BufferState,  // associated mobiles talk when their buffer holds a task
  IidThinning,  // every mobile talks independently w.p. (1 - delta) p_L
};

/// Frame length used in simulation, whole slots.
long sim_frame_slots(const NetworkConfig& cfg, double g);

struct SirResult {
  std::vector<double> sir;      // per mobile; 0 for unassociated
  std::vector<char> active;     // transmitted in the snapshot frame
  std::vector<char> connected;  // associated and sir >= theta
};

enum class Exec { Serial, Parallel };

/// SIR at each mobile's serving AP, for central mobiles only unless `all`.
SirResult evaluate_sir(const Realization& real, const NetworkConfig& cfg, double g,
                       InterfererModel model, Exec exec = Exec::Serial, bool all = false);

/// Connected fraction among central associated mobiles; empty when none.
std::optional<double> connected_fraction(const Realization& real, const SirResult& sir);

struct StabilityClassification {
  std::vector<int> aps;                  // central APs
  std::vector<std::vector<int>> served;  // connected mobiles per central AP
  std::vector<char> stable;              // N beta* < mu_max
  std::optional<double> fraction;        // over central APs with N >= 1
};

StabilityClassification classify_stability(const Realization& real, const SirResult& sir,
                                           const NetworkConfig& cfg, const TrafficRates& rates,
                                           const VmPolicy& vm);

struct TaskRecord {
  double arrival = 0.0;
  double start = 0.0;
  double completion = 0.0;
};

/// Single compute server driven as a birth-death chain with total departure
/// rate mu*(n). FCFS: the tasks in service are the first min(n, m_max) in line.
class ComputeServer {
 public:
  ComputeServer(const VmPolicy& vm, std::uint64_t seed, double window_lo, double window_hi);

  /// Adds `count` tasks at time t (t must not precede the clock).
  void arrive(double t, long count = 1);
  /// Runs departures until time t_end; returns the number of completions.
  long advance_until(double t_end);
  /// Serves every task still present.
  void drain();

  long in_system() const { return static_cast<long>(queue_.size()); }
  long vm_count() const { return in_service_; }
  double clock() const { return clock_; }
  long policy_violations() const { return policy_violations_; }
  /// Integral of in_system over [window_lo, window_hi], task-seconds.
  double area() const { return area_; }
  const std::vector<TaskRecord>& finished() const { return finished_; }

 private:
  void accumulate(double t_next);
  void check_policy();

  VmPolicy vm_;
  std::mt19937_64 rng_;
  double window_lo_;
  double window_hi_;
  double clock_ = 0.0;
  double area_ = 0.0;
  long in_service_ = 0;
  long policy_violations_ = 0;
  std::deque<TaskRecord> queue_;
  std::vector<TaskRecord> finished_;
};

enum class ArrivalSource {
  Superposed,  // the mobiles' own frame-end arrivals
  Poisson,     // synthetic Poisson stream at rate N p_L / L
  Periodic,    // evenly spaced at the same rate
};

struct HorizonPlan {
  long frame_slots = 1;
  double horizon_slots = 0.0;
  double warmup_slots = 0.0;
};

/// horizon = max(horizon_slots, min_frames frames); warmup a fixed fraction.
HorizonPlan plan_horizon(long frame_slots, double horizon_slots, long min_frames,
                         double warmup_fraction);

/// Outcome of queueing one CS.
struct CsResult {
  int ap = -1;
  long mobiles = 0;
  long tasks = 0;             // tasks arriving inside the window
  double latency_sum = 0.0;   // comp latency of those tasks, s
  double area = 0.0;          // in-system integral over the window, task-s
  double window_sec = 0.0;
  long policy_violations = 0;
  double mean_latency() const { return tasks > 0 ? latency_sum / static_cast<double>(tasks) : 0.0; }
};

struct ModeRun {
  std::vector<CsResult> servers;   // simulated (stable, N >= 1) CSs
  double comm_latency_sum = 0.0;   // slots
  long comm_tasks = 0;
  double arrivals_per_cs_slot = 0.0;  // mean over central CSs
  long bookkeeping_frames = 0;
  long bookkeeping_violations = 0;
};

/// Asynchronous offloading: per-mobile uniform frame phase.
ModeRun run_async(const Realization& real, const StabilityClassification& cls,
                  const NetworkConfig& cfg, double g_star, const HorizonPlan& plan,
                  ArrivalSource source = ArrivalSource::Superposed);

/// Synchronous offloading: common frame boundaries, batches at frame starts.
/// Cross-checks Q_{t+1} = max(Q_t + A_{t+1} - C_t, 0) at every frame.
ModeRun run_sync(const Realization& real, const StabilityClassification& cls,
                 const NetworkConfig& cfg, double g_star, const HorizonPlan& plan);

/// CS-weighted mean comp latency of a run; empty when no CS saw a task.
std::optional<double> cs_mean_latency(const ModeRun& run);

/// (mean(superposed) - mean(reference)) / mean(reference), both streams served
/// by identically seeded servers. Signed; callers compare its magnitude.
std::optional<double> poisson_approx_check(const Realization& real, const StabilityClassification& cls,
                                           const NetworkConfig& cfg, double g_star,
                                           const HorizonPlan& plan,
                                           ArrivalSource reference = ArrivalSource::Poisson);

struct SimOptions {
  double window_factor = 20.0;  // window side / r0
  InterfererModel interferers = InterfererModel::BufferState;
  double horizon_slots = 2e4;
  long min_frames = 100;
  double warmup_fraction = 0.2;
  bool run_async = false;
  bool run_sync = false;
  bool poisson_twin = false;
};

/// Everything one realization contributes.
struct RealizationMetrics {
  std::optional<double> connectivity;
  std::optional<double> stability;
  std::optional<double> comm_latency_slots;
  std::optional<double> arrival_rate;  // tasks/slot per central CS
  std::optional<double> comp_async_sec;
  std::optional<double> comp_sync_sec;
  std::optional<double> poisson_divergence;  // signed, see poisson_approx_check
  std::optional<double> async_sync_ratio;
  double little_area = 0.0;
  double little_latency = 0.0;
  long bookkeeping_frames = 0;
  long bookkeeping_violations = 0;
  long policy_violations = 0;
};

RealizationMetrics simulate_realization(const NetworkConfig& cfg, double g_star,
                                        const SimOptions& opts, std::uint64_t seed,
                                        Exec exec = Exec::Serial);

/// Mean and 95% normal-approximation interval over realizations.
struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;  // infinite with fewer than two samples
  long n = 0;
  double lo() const { return mean - half_width; }
  double hi() const { return mean + half_width; }
  bool defined() const { return n > 0; }
};

Estimate estimate(std::span<const double> xs);

struct SimStats {
  Estimate connectivity_fraction;
  Estimate stability_fraction;
  Estimate mean_comm_latency_slots;
  Estimate mean_comp_latency_async_sec;
  Estimate mean_comp_latency_sync_sec;
  Estimate arrival_rate_empirical;
  Estimate poisson_divergence;
  Estimate async_sync_ratio;
  long realization_count = 0;
  double little_area = 0.0;
  double little_latency = 0.0;
  long bookkeeping_frames = 0;
  long bookkeeping_violations = 0;
  long policy_violations = 0;
};

SimStats summarize(std::span<const RealizationMetrics> runs);

struct MonteCarloJob {
  NetworkConfig cfg;
  double g_star = 1.0;
  SimOptions opts;
  long realizations = 1;
  std::uint64_t seed = 0;
};

/// Seed of realization r of a job.
std::uint64_t realization_seed(std::uint64_t seed, long r);

/// Applies fn(seed_r) to realizations 0..n-1. The parallel path writes each
/// result to its own slot, so the output never depends on scheduling.
template <class Fn>
auto map_realizations(long n, std::uint64_t seed, Exec exec, Fn&& fn) {
  using R = decltype(fn(std::uint64_t{}));
  std::vector<R> out(static_cast<std::size_t>(n));
  if (exec == Exec::Serial) {
    for (long r = 0; r < n; ++r) out[static_cast<std::size_t>(r)] = fn(realization_seed(seed, r));
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (long r = 0; r < n; ++r) out[static_cast<std::size_t>(r)] = fn(realization_seed(seed, r));
  }
  return out;
}

/// Realizations in order on the calling thread.
std::vector<RealizationMetrics> run_monte_carlo_serial(const MonteCarloJob& job);
/// Realizations spread over OpenMP threads; identical output to the serial run.
std::vector<RealizationMetrics> run_monte_carlo_parallel(const MonteCarloJob& job);

}  // namespace meclab

#endif
