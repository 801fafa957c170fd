#include "meclab/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace meclab {

double path_gain(double dist2, double alpha) {
  // Guard the measure-zero coincident case.
  const double d2 = dist2 < 1e-12 ? 1e-12 : dist2;
  if (alpha == 3.0) return 1.0 / (d2 * std::sqrt(d2));
  if (alpha == 4.0) return 1.0 / (d2 * d2);
  return std::pow(d2, -0.5 * alpha);
}

namespace {

double sum_for_ap(const InterferenceField& f, int ap) {
  const Point& y = f.aps[static_cast<std::size_t>(ap)];
  double s = 0.0;
  for (std::size_t j = 0; j < f.mobiles.size(); ++j) {
    if (f.weight[j] == 0.0 || f.association[j] == ap) continue;
    s += f.weight[j] * path_gain(torus_dist2(y, f.mobiles[j], f.side), f.alpha);
  }
  return s;
}

}  // namespace

void interference_at_aps_serial(const InterferenceField& field, std::span<const int> targets,
                                std::span<double> out) {
  for (std::size_t k = 0; k < targets.size(); ++k) out[k] = sum_for_ap(field, targets[k]);
}

void interference_at_aps_parallel(const InterferenceField& field, std::span<const int> targets,
                                  std::span<double> out) {
  const long n = static_cast<long>(targets.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = sum_for_ap(field, targets[static_cast<std::size_t>(k)]);
}

void apply_thread_limit_from_env() {
#ifdef _OPENMP
  if (const char* env = std::getenv("MECLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace meclab
