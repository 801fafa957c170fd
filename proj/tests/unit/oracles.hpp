#ifndef MECLAB_TESTS_ORACLES_HPP
#define MECLAB_TESTS_ORACLES_HPP

// Small reference computations kept deliberately naive so they share no code
// with the library under test.

#include <boost/math/distributions/poisson.hpp>

#include <cmath>
#include <functional>
#include <stdexcept>

#include "meclab/domain.hpp"

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  if ((flo < 0) == (f(hi) < 0)) throw std::logic_error("oracle bisect: no bracket");
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double w0(double x) {
  return bisect([x](double w) { return w * std::exp(w) - x; }, -1.0, std::max(1.0, std::log1p(x) + 1.0));
}

inline double wm1(double x) {
  return bisect([x](double w) { return w * std::exp(w) - x; }, -800.0, -1.0);
}

inline double pmf(double mean, long n) {
  return boost::math::pdf(boost::math::poisson_distribution<double>(mean), static_cast<double>(n));
}

inline double cdf(double mean, long n) {
  return boost::math::cdf(boost::math::poisson_distribution<double>(mean), static_cast<double>(n));
}

// Config whose T_min is exactly `tmin` slots.
inline meclab::NetworkConfig with_tmin(meclab::NetworkConfig cfg, double tmin) {
  cfg.task_bits = tmin * cfg.bandwidth_hz * cfg.slot_sec * std::log2(1.0 + cfg.theta);
  return cfg;
}

}  // namespace oracle

#endif
