#ifndef MECLAB_KERNELS_HPP
#define MECLAB_KERNELS_HPP

#include <cstdint>
#include <span>

namespace meclab {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Squared minimum-image distance on a square torus of the given side.
inline double torus_dist2(const Point& a, const Point& b, double side) {
  double dx = a.x - b.x;
  double dy = a.y - b.y;
  if (dx > 0.5 * side) dx -= side;
  else if (dx < -0.5 * side) dx += side;
  if (dy > 0.5 * side) dy -= side;
  else if (dy < -0.5 * side) dy += side;
  return dx * dx + dy * dy;
}

/// d^(-alpha) from d^2, with exact fast paths for alpha = 3 and 4.
double path_gain(double dist2, double alpha);

/// Interference input for one realization. `weight[j]` is the received-power
/// scale of mobile j (fading times power; zero when silent). Mobiles served by
/// the AP itself are skipped; the caller adds co-cell terms.
struct InterferenceField {
  std::span<const Point> aps;
  std::span<const Point> mobiles;
  std::span<const double> weight;
  std::span<const int> association;
  double alpha = 3.0;
  double side = 1.0;
};

/// out[k] = sum over mobiles j not served by AP targets[k] of
/// weight[j] * |mobile_j - ap|^(-alpha). Reference implementation.
void interference_at_aps_serial(const InterferenceField& field, std::span<const int> targets,
                                std::span<double> out);

/// Same result, bit for bit, with the AP loop split across OpenMP threads.
void interference_at_aps_parallel(const InterferenceField& field, std::span<const int> targets,
                                  std::span<double> out);

/// Sets the OpenMP thread count from MECLAB_THREADS when present.
void apply_thread_limit_from_env();

/// splitmix64 finalizer; used to derive independent RNG seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace meclab

#endif
