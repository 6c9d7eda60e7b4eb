// AVX2/FMA variants. Functions carry a target attribute instead of building
// the whole translation unit with -mavx2, so nothing here leaks AVX code into
// inline functions shared with the scalar build.

#include "kernels_internal.hpp"

#if HANDOVER_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <cmath>
#include <limits>

#define HANDOVER_AVX2 __attribute__((target("avx2,fma")))

namespace handover::simd::detail {

namespace {

HANDOVER_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

HANDOVER_AVX2 inline double hmin(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_min_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_min_sd(m, _mm_unpackhi_pd(m, m)));
}

}  // namespace

HANDOVER_AVX2 void skin_avx2(const SkinningRaw& a) {
  const std::size_t n = a.num_points;
  std::size_t v = 0;
  for (; v + 4 <= n; v += 4) {
    __m256d m[12];
    for (auto& r : m) r = _mm256_setzero_pd();
    for (std::size_t k = 0; k < a.num_joints; ++k) {
      const __m256d w = _mm256_loadu_pd(a.weights + k * n + v);
      const double* t = a.transforms + 12 * k;
      for (int j = 0; j < 12; ++j) m[j] = _mm256_fmadd_pd(w, _mm256_broadcast_sd(t + j), m[j]);
    }
    const __m256d x = _mm256_loadu_pd(a.rest_x + v);
    const __m256d y = _mm256_loadu_pd(a.rest_y + v);
    const __m256d z = _mm256_loadu_pd(a.rest_z + v);
    __m256d ox = _mm256_fmadd_pd(m[0], x, _mm256_fmadd_pd(m[1], y, _mm256_fmadd_pd(m[2], z, m[3])));
    __m256d oy = _mm256_fmadd_pd(m[4], x, _mm256_fmadd_pd(m[5], y, _mm256_fmadd_pd(m[6], z, m[7])));
    __m256d oz = _mm256_fmadd_pd(m[8], x, _mm256_fmadd_pd(m[9], y, _mm256_fmadd_pd(m[10], z, m[11])));
    _mm256_storeu_pd(a.out_x + v, ox);
    _mm256_storeu_pd(a.out_y + v, oy);
    _mm256_storeu_pd(a.out_z + v, oz);
  }
  if (v < n) {
    // tail: reuse the reference loop on the remaining columns
    for (; v < n; ++v) {
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
}

HANDOVER_AVX2 double min_sphere_distance_avx2(const double* px, const double* py,
                                              const double* pz, std::size_t n,
                                              const double* spheres, std::size_t num_spheres) {
  const double inf = std::numeric_limits<double>::infinity();
  double best = inf;
  for (std::size_t s = 0; s < num_spheres; ++s) {
    const double* sp = spheres + 4 * s;
    const __m256d cx = _mm256_set1_pd(sp[0]);
    const __m256d cy = _mm256_set1_pd(sp[1]);
    const __m256d cz = _mm256_set1_pd(sp[2]);
    __m256d vmin = _mm256_set1_pd(inf);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(px + i), cx);
      const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(py + i), cy);
      const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(pz + i), cz);
      const __m256d d2 = _mm256_fmadd_pd(dx, dx, _mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dz, dz)));
      vmin = _mm256_min_pd(vmin, d2);
    }
    double min_sq = hmin(vmin);
    for (; i < n; ++i) {
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

HANDOVER_AVX2 void sum_points_avx2(const double* px, const double* py, const double* pz,
                                   std::size_t n, double* out) {
  __m256d sx = _mm256_setzero_pd(), sy = _mm256_setzero_pd(), sz = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    sx = _mm256_add_pd(sx, _mm256_loadu_pd(px + i));
    sy = _mm256_add_pd(sy, _mm256_loadu_pd(py + i));
    sz = _mm256_add_pd(sz, _mm256_loadu_pd(pz + i));
  }
  double rx = hsum(sx), ry = hsum(sy), rz = hsum(sz);
  for (; i < n; ++i) {
    rx += px[i];
    ry += py[i];
    rz += pz[i];
  }
  out[0] = rx;
  out[1] = ry;
  out[2] = rz;
}

}  // namespace handover::simd::detail

#endif
