#include "meclab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace meclab {

namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e

double residual(double w, double x) { return w * std::exp(w) - x; }

double seed_principal(double x) {
  if (x < -0.32) {
    // Series about the branch point.
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  }
  if (x < 3.0) return std::log1p(x) * (1.0 - std::log1p(x) / (2.0 + std::log1p(x)));
  const double l1 = std::log(x);
  return l1 - std::log(l1);
}

double seed_lower(double x) {
  if (x < -0.25) {
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    return -1.0 - p - p * p / 3.0 - 11.0 / 72.0 * p * p * p;
  }
  const double l1 = std::log(-x);
  return l1 - std::log(-l1);
}

double halley(double x, double w, bool& ok) {
  ok = false;
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double step = f / denom;
    w -= step;
    if (!std::isfinite(w)) break;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) {
      ok = true;
      break;
    }
  }
  return w;
}

}  // namespace

double lambert_w(double x, Branch branch) {
  if (std::isnan(x)) throw DomainError("lambert_w: NaN argument");
  // Allow -1/e rounded one ulp low.
  if (x < -kInvE) {
    if (x < -kInvE * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) {
      throw DomainError("lambert_w: argument below -1/e");
    }
    x = -kInvE;
  }
  if (branch == Branch::LowerMinusOne && x >= 0.0) {
    throw DomainError("lambert_w: lower branch requires x < 0");
  }
  if (x == -kInvE) return -1.0;
  if (x == 0.0) return 0.0;

  const double tol = 1e-12 * std::max(1.0, std::abs(x));
  bool ok = false;
  double w = halley(x, branch == Branch::Principal ? seed_principal(x) : seed_lower(x), ok);
  const bool on_branch = branch == Branch::Principal ? w >= -1.0 : w <= -1.0;
  if (ok && on_branch && std::abs(residual(w, x)) <= tol) return w;

  // Bisection on the monotone piece of w e^w.
  double lo = -1.0, hi = -1.0;
  if (branch == Branch::Principal) {
    hi = std::max(1.0, std::log1p(std::max(x, 0.0)) + 1.0);
  } else {
    lo = -2.0;
    while (residual(lo, x) < 0.0) lo *= 2.0;  // w e^w -> 0- as w -> -inf
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double r = residual(mid, x);
    if (r == 0.0) return mid;
    // Increasing on [-1, inf), decreasing on (-inf, -1].
    const bool move_hi = branch == Branch::Principal ? r > 0.0 : r < 0.0;
    (move_hi ? hi : lo) = mid;
    if (hi - lo <= 1e-16 * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

double beta_alpha(double alpha) {
  if (!(alpha > 2.0)) throw DomainError("beta_alpha: requires alpha > 2");
  return std::numbers::pi / std::sin(2.0 * std::numbers::pi / alpha);
}

double poisson_log_pmf(double mean, long n) {
  if (n < 0) return -std::numeric_limits<double>::infinity();
  if (mean == 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return static_cast<double>(n) * std::log(mean) - mean - std::lgamma(static_cast<double>(n) + 1.0);
}

double poisson_pmf(double mean, long n) { return std::exp(poisson_log_pmf(mean, n)); }

double poisson_cdf(double mean, long n) {
  if (n < 0) return 0.0;
  double s = 0.0;
  for (long k = 0; k <= n; ++k) s += poisson_pmf(mean, k);
  return std::min(s, 1.0);
}

double truncated_poisson_moment(double mean, long lo, long hi,
                                const std::function<double(long)>& f) {
  if (mean < 0.0 || lo < 0) throw DomainError("truncated_poisson_moment: negative mean or lo");
  if (hi == kUnboundedHi) {
    hi = std::max(lo, static_cast<long>(std::ceil(mean + 12.0 * std::sqrt(mean) + 30.0)));
  }
  if (hi < lo) throw DomainError("truncated_poisson_moment: hi < lo");

  double log_max = -std::numeric_limits<double>::infinity();
  for (long n = lo; n <= hi; ++n) log_max = std::max(log_max, poisson_log_pmf(mean, n));
  // Mass below the smallest normal double counts as underflow.
  if (!std::isfinite(log_max) || log_max + std::log(static_cast<double>(hi - lo + 1)) <
                                     std::log(std::numeric_limits<double>::min())) {
    throw DomainError("truncated_poisson_moment: normalizing mass underflows");
  }
  double num = 0.0, den = 0.0;
  for (long n = lo; n <= hi; ++n) {
    const double w = std::exp(poisson_log_pmf(mean, n) - log_max);
    if (w == 0.0) continue;
    num += w * f(n);
    den += w;
  }
  return num / den;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  const double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) throw DomainError("bisect: no sign change on bracket");
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= tol * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> find_roots_bracketed(const std::function<double(double)>& f,
                                         double lo, double hi, double tol) {
  constexpr int kGrid = 2048;
  std::vector<double> roots;
  if (!(hi > lo)) return roots;
  const bool log_grid = lo > 0.0;
  auto grid = [&](int i) {
    const double t = static_cast<double>(i) / (kGrid - 1);
    if (i == kGrid - 1) return hi;
    return log_grid ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  };
  double x_prev = grid(0);
  double f_prev = f(x_prev);
  if (f_prev == 0.0) roots.push_back(x_prev);
  for (int i = 1; i < kGrid; ++i) {
    const double x = grid(i);
    const double fx = f(x);
    if (fx == 0.0) {
      roots.push_back(x);
    } else if (f_prev != 0.0 && (fx < 0.0) != (f_prev < 0.0)) {
      roots.push_back(bisect(f, x_prev, x, tol));
    }
    x_prev = x;
    f_prev = fx;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace meclab
