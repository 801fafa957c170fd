#include "meclab/domain.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace meclab {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out = "invalid configuration:";
  for (const auto& s : items) out += " [" + s + "]";
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

double theta_from_db(double db) { return std::pow(10.0, db / 10.0); }

void NetworkConfig::validate() const {
  std::vector<std::string> bad;
  auto positive = [&](const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) bad.push_back(fmt::format("{} must be > 0 (got {})", name, v));
  };
  auto open_unit = [&](const char* name, double v) {
    if (!(v > 0.0 && v < 1.0)) bad.push_back(fmt::format("{} must lie in (0,1) (got {})", name, v));
  };
  positive("lambda_b", lambda_b);
  if (!(lambda_m >= 0.0) || !std::isfinite(lambda_m)) {
    bad.push_back(fmt::format("lambda_m must be >= 0 (got {})", lambda_m));
  }
  if (!(alpha > 2.0) || !std::isfinite(alpha)) bad.push_back(fmt::format("alpha must be > 2 (got {})", alpha));
  positive("theta", theta);
  open_unit("delta", delta);
  open_unit("epsilon", epsilon);
  open_unit("rho", rho);
  positive("bandwidth_hz", bandwidth_hz);
  positive("task_bits", task_bits);
  positive("slot_sec", slot_sec);
  if (!(gen_prob > 0.0 && gen_prob <= 1.0)) {
    bad.push_back(fmt::format("gen_prob must lie in (0,1] (got {})", gen_prob));
  }
  positive("comp_sec", comp_sec);
  positive("degrade", degrade);
  positive("tx_power", tx_power);
  positive("energy_c4", energy_c4);
  positive("energy_c5", energy_c5);
  if (!bad.empty()) throw ConfigError(std::move(bad));
}

DerivedBasics derive_basics(const NetworkConfig& cfg) {
  cfg.validate();
  DerivedBasics out;
  out.zone_radius = std::sqrt(std::log(1.0 / cfg.delta) / (std::numbers::pi * cfg.lambda_b));
  out.tmin_slots = cfg.task_bits / (cfg.bandwidth_hz * cfg.slot_sec * std::log2(1.0 + cfg.theta));
  out.mean_mobiles_per_zone = cfg.lambda_m * std::numbers::pi * out.zone_radius * out.zone_radius;
  return out;
}

}  // namespace meclab
