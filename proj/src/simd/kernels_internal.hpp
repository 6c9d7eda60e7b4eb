#pragma once

#include <cstddef>

namespace handover::simd::detail {

struct SkinningRaw {
  const double* rest_x;
  const double* rest_y;
  const double* rest_z;
  const double* weights;
  const double* transforms;
  std::size_t num_points;
  std::size_t num_joints;
  double* out_x;
  double* out_y;
  double* out_z;
};

void skin_scalar(const SkinningRaw& a);
double min_sphere_distance_scalar(const double* px, const double* py, const double* pz,
                                  std::size_t n, const double* spheres, std::size_t num_spheres);
void sum_points_scalar(const double* px, const double* py, const double* pz, std::size_t n,
                       double* out);

#if defined(__x86_64__) || defined(_M_X64)
#define HANDOVER_HAVE_AVX2_KERNELS 1
void skin_avx2(const SkinningRaw& a);
double min_sphere_distance_avx2(const double* px, const double* py, const double* pz,
                                std::size_t n, const double* spheres, std::size_t num_spheres);
void sum_points_avx2(const double* px, const double* py, const double* pz, std::size_t n,
                     double* out);
#else
#define HANDOVER_HAVE_AVX2_KERNELS 0
#endif

}  // namespace handover::simd::detail
