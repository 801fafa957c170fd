#ifndef MECLAB_DOMAIN_HPP
#define MECLAB_DOMAIN_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace meclab {

/// Lists every violated field constraint of a configuration.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Full parameter vector of the edge-computing network. Units in comments;
/// theta is linear (use theta_from_db for dB inputs).
struct NetworkConfig {
  double lambda_b = 2e-2;        // AP/CS density, 1/m^2
  double lambda_m = 5e-2;        // mobile density, 1/m^2
  double alpha = 3.0;            // path-loss exponent, > 2
  double theta = 1.2589254117941673;  // SIR threshold (1 dB)
  double delta = 1e-2;           // allowed uncovered fraction, (0,1)
  double epsilon = 5e-2;         // allowed disconnected fraction, (0,1)
  double rho = 5e-2;             // allowed unstable-CS fraction, (0,1)
  double bandwidth_hz = 6e6;
  double task_bits = 0.5e6;
  double slot_sec = 0.01;
  double gen_prob = 0.2;         // task generation probability per slot, (0,1]
  double comp_sec = 0.1;         // single-VM expected computation time T0, s
  double degrade = 0.2;          // I/O interference factor d, > 0
  double tx_power = 1.0;         // W
  double energy_c4 = 1.0;
  double energy_c5 = 1.0;

  /// Throws ConfigError naming every violated constraint.
  void validate() const;
};

double theta_from_db(double db);

struct DerivedBasics {
  double zone_radius = 0.0;       // r0, m
  double tmin_slots = 0.0;        // slots to send one task over the full band
  double mean_mobiles_per_zone = 0.0;
};

DerivedBasics derive_basics(const NetworkConfig& cfg);

}  // namespace meclab

#endif
