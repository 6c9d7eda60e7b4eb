#include <cmath>
#include <limits>

#include "kernels_internal.hpp"

namespace handover::simd::detail {

void skin_scalar(const SkinningRaw& a) {
  const std::size_t n = a.num_points;
  for (std::size_t v = 0; v < n; ++v) {
    double m[12] = {};
    for (std::size_t k = 0; k < a.num_joints; ++k) {
      const double w = a.weights[k * n + v];
      const double* t = a.transforms + 12 * k;
      for (int j = 0; j < 12; ++j) m[j] += w * t[j];
    }
    const double x = a.rest_x[v], y = a.rest_y[v], z = a.rest_z[v];
    a.out_x[v] = m[0] * x + m[1] * y + m[2] * z + m[3];
    a.out_y[v] = m[4] * x + m[5] * y + m[6] * z + m[7];
    a.out_z[v] = m[8] * x + m[9] * y + m[10] * z + m[11];
  }
}

double min_sphere_distance_scalar(const double* px, const double* py, const double* pz,
                                  std::size_t n, const double* spheres, std::size_t num_spheres) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < num_spheres; ++s) {
    const double* sp = spheres + 4 * s;
    double min_sq = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = px[i] - sp[0];
      const double dy = py[i] - sp[1];
      const double dz = pz[i] - sp[2];
      const double d2 = dx * dx + dy * dy + dz * dz;
      if (d2 < min_sq) min_sq = d2;
    }
    if (n > 0) {
      const double d = std::sqrt(min_sq) - sp[3];
      if (d < best) best = d;
    }
  }
  return best;
}

void sum_points_scalar(const double* px, const double* py, const double* pz, std::size_t n,
                       double* out) {
  double sx = 0.0, sy = 0.0, sz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += px[i];
    sy += py[i];
    sz += pz[i];
  }
  out[0] = sx;
  out[1] = sy;
  out[2] = sz;
}

}  // namespace handover::simd::detail
