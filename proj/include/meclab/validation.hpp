#ifndef MECLAB_VALIDATION_HPP
#define MECLAB_VALIDATION_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "meclab/domain.hpp"
#include "meclab/simulator.hpp"

namespace meclab {

enum class Verdict { Pass, Fail, Inconclusive };

std::string_view verdict_name(Verdict v);

struct CheckResult {
  int id = 0;
  std::string name;
  std::string analytic;
  std::string simulated;
  Verdict verdict = Verdict::Fail;
  std::string note;
  double seconds = 0.0;
};

struct ValidationSettings {
  NetworkConfig base;
  long realizations = 2000;
  std::uint64_t seed = 20181016;
  Exec exec = Exec::Parallel;
  /// Negative control: simulate connectivity with the SIR threshold's dB
  /// sign flipped while the analytic side keeps the true threshold.
  bool flip_theta_in_simulation = false;
};

CheckResult check_special_functions();
CheckResult check_connectivity(const ValidationSettings& s);
CheckResult check_coverage_constraint(const ValidationSettings& s);
CheckResult check_comm_latency(const ValidationSettings& s);
CheckResult check_dense_scaling(const ValidationSettings& s);
CheckResult check_arrival_quasi_concavity(const ValidationSettings& s);
CheckResult check_vm_policy();
CheckResult check_stability(const ValidationSettings& s);
CheckResult check_async_bracketing(const ValidationSettings& s);
CheckResult check_sync_regimes(const ValidationSettings& s);
CheckResult check_sync_async_ratio(const ValidationSettings& s);
CheckResult check_poisson_approximation(const ValidationSettings& s);
CheckResult check_bookkeeping(const ValidationSettings& s);

/// Runs every check in order. `only` selects a subset by id (empty: all).
std::vector<CheckResult> validate_all(const ValidationSettings& s, const std::vector<int>& only = {});

/// Fixed-width table, one line per check.
std::string format_checks(const std::vector<CheckResult>& checks);

/// True when no check failed.
bool no_failures(const std::vector<CheckResult>& checks);

}  // namespace meclab

#endif
