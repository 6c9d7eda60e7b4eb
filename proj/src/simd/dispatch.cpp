#include <cstdlib>
#include <stdexcept>
#include <string>

#include "handover/simd/kernels.hpp"
#include "kernels_internal.hpp"

namespace handover::simd {

namespace {

Isa resolve_active() {
  const Isa best = detected_isa();
  if (const char* env = std::getenv("HANDOVER_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Isa::kScalar;
    if (v == "avx2" && isa_supported(Isa::kAvx2)) return Isa::kAvx2;
  }
  return best;
}

void check_supported(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("SIMD variant not supported on this CPU: " +
                                std::string(isa_name(isa)));
  }
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2:
#if HANDOVER_HAVE_AVX2_KERNELS
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() { return isa_supported(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar; }

Isa active_isa() {
  static const Isa isa = resolve_active();
  return isa;
}

void skin_vertices(const SkinningArgs& args, Isa isa) {
  const std::size_t n = args.rest_x.size();
  if (args.rest_y.size() != n || args.rest_z.size() != n || args.out_x.size() != n ||
      args.out_y.size() != n || args.out_z.size() != n || args.transforms.size() % 12 != 0 ||
      args.weights.size() != n * (args.transforms.size() / 12)) {
    throw std::invalid_argument("skin_vertices: inconsistent array sizes");
  }
  check_supported(isa);
  const detail::SkinningRaw raw{args.rest_x.data(),     args.rest_y.data(), args.rest_z.data(),
                                args.weights.data(),    args.transforms.data(),
                                n,                      args.transforms.size() / 12,
                                args.out_x.data(),      args.out_y.data(), args.out_z.data()};
#if HANDOVER_HAVE_AVX2_KERNELS
  if (isa == Isa::kAvx2) return detail::skin_avx2(raw);
#endif
  detail::skin_scalar(raw);
}

double min_sphere_point_distance(std::span<const double> px, std::span<const double> py,
                                 std::span<const double> pz, std::span<const double> spheres,
                                 Isa isa) {
  const std::size_t n = px.size();
  if (py.size() != n || pz.size() != n || spheres.size() % 4 != 0) {
    throw std::invalid_argument("min_sphere_point_distance: inconsistent array sizes");
  }
  check_supported(isa);
#if HANDOVER_HAVE_AVX2_KERNELS
  if (isa == Isa::kAvx2) {
    return detail::min_sphere_distance_avx2(px.data(), py.data(), pz.data(), n, spheres.data(),
                                            spheres.size() / 4);
  }
#endif
  return detail::min_sphere_distance_scalar(px.data(), py.data(), pz.data(), n, spheres.data(),
                                            spheres.size() / 4);
}

std::array<double, 3> sum_points(std::span<const double> px, std::span<const double> py,
                                 std::span<const double> pz, Isa isa) {
  const std::size_t n = px.size();
  if (py.size() != n || pz.size() != n) {
    throw std::invalid_argument("sum_points: inconsistent array sizes");
  }
  check_supported(isa);
  std::array<double, 3> out{};
#if HANDOVER_HAVE_AVX2_KERNELS
  if (isa == Isa::kAvx2) {
    detail::sum_points_avx2(px.data(), py.data(), pz.data(), n, out.data());
    return out;
  }
#endif
  detail::sum_points_scalar(px.data(), py.data(), pz.data(), n, out.data());
  return out;
}

}  // namespace handover::simd
