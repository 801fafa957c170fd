#ifndef MECLAB_EXPERIMENT_HPP
#define MECLAB_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "meclab/config.hpp"
#include "meclab/simulator.hpp"

namespace meclab {

struct CsvRow {
  std::string experiment;
  std::string sweep_variable;
  double value = 0.0;
  std::string metric;
  double analytic = 0.0;
  double sim_mean = 0.0;
  double sim_ci95_lo = 0.0;
  double sim_ci95_hi = 0.0;
  long n_realizations = 0;
  std::uint64_t seed = 0;
};

inline constexpr const char* kCsvHeader =
    "experiment,sweep_variable,value,metric,analytic,sim_mean,sim_ci95_lo,sim_ci95_hi,n_realizations,seed";

/// Network at one grid point of a sweep.
NetworkConfig apply_sweep_value(const NetworkConfig& base, SweepVariable var, double value);

/// One row per (grid point, metric), in grid order. Points whose planning
/// fails become a single `error:<code>` row and the sweep continues.
std::vector<CsvRow> run_experiment(const Experiment& exp, const NetworkConfig& base,
                                   const SimOptions& sim, Exec exec = Exec::Parallel);

/// Header line plus rows; numbers with 9 significant digits.
std::string format_csv(const std::vector<CsvRow>& rows);

}  // namespace meclab

#endif
