#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "handover/grasp.hpp"

namespace handover {

namespace {

struct Pair {
  Eigen::Index i, j;
};

RotationMatrix grasp_rotation(const Vec3& closing, const Vec3& midpoint, const Point3& centroid) {
  Vec3 away = midpoint - centroid;
  away -= away.dot(closing) * closing;
  if (away.norm() < 1e-6) {
    // midpoint on the centroid line: approach from above, else from +y
    away = Vec3::UnitZ() - closing.z() * closing;
    if (away.norm() < 1e-6) away = Vec3::UnitY() - closing.y() * closing;
  }
  const Vec3 approach = -away.normalized();
  Mat3 m;
  m.col(0) = closing;
  m.col(1) = approach.cross(closing);
  m.col(2) = approach;
  return RotationMatrix(m);
}

}  // namespace

std::vector<GraspCandidate> antipodal_candidates(const ObjectCloud& cloud,
                                                 const AntipodalOptions& opts) {
  cloud.validate();
  if (cloud.points.rows() < 2) fail(ErrorCode::kInvalidInput, "antipodal sampling needs >= 2 points");
  if (opts.count < 1) fail(ErrorCode::kInvalidInput, "candidate count must be >= 1");
  if (!(opts.friction_half_angle >= 0.0) || !(opts.friction_half_angle < std::numbers::pi / 2)) {
    fail(ErrorCode::kInvalidInput, "friction half-angle must lie in [0, pi/2)");
  }
  const double max_width = std::min(opts.max_width, kMaxGripperWidth);
  const VertexMatrix normals = cloud.normals ? *cloud.normals : estimate_normals(cloud.points);
  const VertexMatrix& pts = cloud.points;
  const Point3 centroid = pts.colwise().mean().transpose();
  const double cos_cone = std::cos(opts.friction_half_angle);

  std::vector<Pair> eligible;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const Vec3 pi = pts.row(i).transpose();
    const Vec3 ni = normals.row(i).transpose();
    for (Eigen::Index j = i + 1; j < pts.rows(); ++j) {
      const Vec3 d = pts.row(j).transpose() - pi;
      const double sep = d.norm();
      if (!(sep > 1e-9) || sep > max_width) continue;
      const Vec3 u = d / sep;
      // inward normal at i must point toward j, and vice versa
      if (-ni.dot(u) < cos_cone) continue;
      if (normals.row(j).dot(u.transpose()) < cos_cone) continue;
      eligible.push_back({i, j});
    }
  }
  if (eligible.empty()) {
    fail(ErrorCode::kNoCandidatesFound, "no antipodal point pairs in cloud '" + cloud.name + "'");
  }

  // partial Fisher-Yates on the raw engine output so the draw does not depend
  // on the standard library's distribution implementation
  const std::size_t take = std::min(opts.count, eligible.size());
  std::mt19937_64 rng(opts.seed);
  for (std::size_t k = 0; k < take; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(rng() % (eligible.size() - k));
    std::swap(eligible[k], eligible[pick]);
  }
  eligible.resize(take);
  std::sort(eligible.begin(), eligible.end(),
            [](const Pair& a, const Pair& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });

  std::vector<GraspCandidate> out;
  out.reserve(take);
  for (const auto& [i, j] : eligible) {
    const Vec3 pi = pts.row(i).transpose();
    const Vec3 pj = pts.row(j).transpose();
    const Vec3 d = pj - pi;
    const double width = d.norm();
    const Vec3 mid = 0.5 * (pi + pj);
    out.emplace_back(RigidTransform{grasp_rotation(d / width, mid, centroid), mid}, width,
                     CandidateSource::kAntipodalSampler);
  }
  return out;
}

}  // namespace handover
