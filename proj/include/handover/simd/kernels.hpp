#pragma once

// Data-parallel inner loops with a scalar reference and an AVX2 variant.
// The variant is chosen at runtime from CPUID; HANDOVER_SIMD=scalar forces
// the reference path. Both paths are tested for equivalence.

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace handover::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);
/// Best ISA supported by this CPU and build.
Isa detected_isa();
/// ISA used by the default overloads (detected, unless overridden by env).
Isa active_isa();

/// Linear blend skinning of a structure-of-arrays point set.
/// `weights` is joint-major (weights[k * n + v]); `transforms` holds one
/// row-major 3x4 matrix [R | t] per joint.
struct SkinningArgs {
  std::span<const double> rest_x, rest_y, rest_z;
  std::span<const double> weights;
  std::span<const double> transforms;
  std::span<double> out_x, out_y, out_z;
};

void skin_vertices(const SkinningArgs& args, Isa isa);
inline void skin_vertices(const SkinningArgs& args) { skin_vertices(args, active_isa()); }

/// Minimum over all (sphere, point) pairs of |centre - point| - radius.
/// `spheres` packs (cx, cy, cz, r) per sphere. Returns +inf for empty input.
double min_sphere_point_distance(std::span<const double> px, std::span<const double> py,
                                 std::span<const double> pz, std::span<const double> spheres,
                                 Isa isa);
inline double min_sphere_point_distance(std::span<const double> px, std::span<const double> py,
                                        std::span<const double> pz,
                                        std::span<const double> spheres) {
  return min_sphere_point_distance(px, py, pz, spheres, active_isa());
}

/// Component-wise sum of a structure-of-arrays point set.
std::array<double, 3> sum_points(std::span<const double> px, std::span<const double> py,
                                 std::span<const double> pz, Isa isa);
inline std::array<double, 3> sum_points(std::span<const double> px, std::span<const double> py,
                                        std::span<const double> pz) {
  return sum_points(px, py, pz, active_isa());
}

}  // namespace handover::simd
