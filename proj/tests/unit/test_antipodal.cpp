#include <cmath>
#include <set>
#include <utility>

#include "helpers.hpp"
#include "handover/grasp.hpp"

using namespace handover;
using test::error_of;

namespace {

// Two facing 4x4 patches at x = -gap/2 and x = +gap/2, normals outward.
ObjectCloud slab(double gap) {
  ObjectCloud c{"slab", VertexMatrix(32, 3), VertexMatrix(32, 3)};
  int k = 0;
  for (double side : {-1.0, 1.0}) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b, ++k) {
        c.points.row(k) << side * gap / 2, 0.01 * a, 0.01 * b;
        c.normals->row(k) << side, 0, 0;
      }
    }
  }
  return c;
}

std::set<std::pair<int, int>> eligible_pairs(const ObjectCloud& c, double half_angle) {
  std::set<std::pair<int, int>> out;
  const double cone = std::cos(half_angle);
  for (int i = 0; i < c.points.rows(); ++i) {
    for (int j = i + 1; j < c.points.rows(); ++j) {
      const Vec3 d = (c.points.row(j) - c.points.row(i)).transpose();
      if (d.norm() > kMaxGripperWidth) continue;
      const Vec3 u = d.normalized();
      const Vec3 ni = c.normals->row(i).transpose(), nj = c.normals->row(j).transpose();
      if (-ni.dot(u) >= cone && nj.dot(u) >= cone) out.insert({i, j});
    }
  }
  return out;
}

std::pair<int, int> pair_of(const ObjectCloud& c, const GraspCandidate& g) {
  // recover the contact points from the jaw line
  const Vec3 x = g.pose().rotation.column(0);
  const Point3 a = g.pose().translation - 0.5 * g.width() * x;
  const Point3 b = g.pose().translation + 0.5 * g.width() * x;
  int ia = -1, ib = -1;
  for (int i = 0; i < c.points.rows(); ++i) {
    if ((c.points.row(i).transpose() - a).norm() < 1e-12) ia = i;
    if ((c.points.row(i).transpose() - b).norm() < 1e-12) ib = i;
  }
  return {ia, ib};
}

}  // namespace

TEST_SUITE("antipodal") {

TEST_CASE("exhaustive: every eligible pair is emitted, in pair order") {
  const ObjectCloud c = slab(0.04);
  const auto oracle = eligible_pairs(c, 0.2618);
  REQUIRE(!oracle.empty());
  AntipodalOptions opts;
  opts.count = 10000;
  const auto got = antipodal_candidates(c, opts);
  REQUIRE(got.size() == oracle.size());
  auto it = oracle.begin();
  for (const auto& g : got) {
    CHECK(pair_of(c, g) == *it++);
    CHECK(g.width() <= kMaxGripperWidth);
    CHECK(g.source() == CandidateSource::kAntipodalSampler);
  }
}

TEST_CASE("sampled subsets are deterministic per seed") {
  const ObjectCloud c = slab(0.04);
  const auto oracle = eligible_pairs(c, 0.2618);
  AntipodalOptions opts;
  opts.count = 8;
  const auto a = antipodal_candidates(c, opts);
  const auto b = antipodal_candidates(c, opts);
  REQUIRE(a.size() == 8);
  std::pair<int, int> prev{-1, -1};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto p = pair_of(c, a[i]);
    CHECK(oracle.count(p) == 1);
    CHECK(p > prev);
    prev = p;
    CHECK((a[i].pose().matrix() - b[i].pose().matrix()).norm() == 0.0);
  }
  opts.seed = 99;
  const auto other = antipodal_candidates(c, opts);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs |= pair_of(c, a[i]) != pair_of(c, other[i]);
  CHECK(differs);
}

TEST_CASE("grasp frame: closing axis along the pair, approach toward the object") {
  const ObjectCloud c = slab(0.04);
  const Point3 centroid = c.points.colwise().mean().transpose();
  AntipodalOptions opts;
  opts.count = 10000;
  for (const auto& g : antipodal_candidates(c, opts)) {
    const Mat3& m = g.pose().rotation.matrix();
    CHECK(RotationMatrix::is_valid(m));
    CHECK(std::abs(m.col(0).dot(m.col(2))) < 1e-12);
    const Vec3 to_centre = centroid - g.pose().translation;
    CHECK(m.col(2).dot(to_centre) >= -1e-12);
  }
}

TEST_CASE("gaps wider than the gripper yield nothing") {
  CHECK(error_of([] { antipodal_candidates(slab(0.08), {}); }) == ErrorCode::kNoCandidatesFound);
  ObjectCloud one = slab(0.04);
  one.points = one.points.topRows(16).eval();
  one.normals = one.normals->topRows(16).eval();
  CHECK(error_of([&] { antipodal_candidates(one, {}); }) == ErrorCode::kNoCandidatesFound);
}

TEST_CASE("fixture clouds, with and without stored normals") {
  const ObjectCloud box = make_box_cloud("box", 0.05, 0.10, 0.16);
  const auto g = antipodal_candidates(box, {});
  CHECK(g.size() == 32);
  // only the 0.05 m faces fit in the jaws; the cone admits one grid step of skew
  for (const auto& c : g) {
    CHECK(c.width() >= 0.05 - 1e-9);
    CHECK(c.width() <= 0.0511);
  }

  ObjectCloud bare = make_cylinder_cloud("cyl", 0.03, 0.12);
  bare.normals.reset();
  const auto h = antipodal_candidates(bare, {});
  CHECK(!h.empty());
  for (const auto& c : h) CHECK(c.width() <= kMaxGripperWidth);
}

}  // TEST_SUITE
