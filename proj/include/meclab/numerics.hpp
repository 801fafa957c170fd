#ifndef MECLAB_NUMERICS_HPP
#define MECLAB_NUMERICS_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace meclab {

/// Raised when an argument lies outside a function's mathematical domain.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

enum class Branch { Principal, LowerMinusOne };

/// Real Lambert W: the w solving w * exp(w) = x on the requested branch.
///
/// Principal is defined on [-1/e, inf) and returns w >= -1; LowerMinusOne is
/// defined on [-1/e, 0) and returns w <= -1. Halley iteration from an
/// asymptotic seed, with bisection when Halley fails to settle (near -1/e).
double lambert_w(double x, Branch branch = Branch::Principal);

/// Integral of k^(2/a - 1) (1 - k)^(-2/a) over [0, 1], i.e. pi / sin(2 pi / a).
double beta_alpha(double alpha);

/// Sentinel for an unbounded upper summation limit.
inline constexpr long kUnboundedHi = -1;

/// E[f(N) | lo <= N <= hi] for N ~ Poisson(mean), by exact summation.
/// hi == kUnboundedHi truncates at mean + 12 sqrt(mean) + 30.
double truncated_poisson_moment(double mean, long lo, long hi,
                                const std::function<double(long)>& f);

/// log P(N = n) for N ~ Poisson(mean).
double poisson_log_pmf(double mean, long n);
double poisson_pmf(double mean, long n);
/// P(N <= n).
double poisson_cdf(double mean, long n);

/// All roots of f on [lo, hi] found by a 2048-point scan (log-spaced when
/// lo > 0) followed by bisection of every sign change. A bracket is accepted
/// once its width is below tol * max(1, |x|). Ascending order; empty when no
/// sign change is seen.
std::vector<double> find_roots_bracketed(const std::function<double(double)>& f,
                                         double lo, double hi, double tol = 1e-12);

/// Single-bracket bisection; f(lo) and f(hi) must differ in sign.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol = 1e-12);

}  // namespace meclab

#endif
