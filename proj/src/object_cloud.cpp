#include "handover/object_cloud.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace handover {

void ObjectCloud::validate() const {
  if (points.rows() < 1) fail(ErrorCode::kInvalidInput, "object cloud '" + name + "' is empty");
  if (!points.allFinite()) fail(ErrorCode::kInvalidInput, "object cloud has non-finite points");
  if (normals) {
    if (normals->rows() != points.rows()) {
      fail(ErrorCode::kInvalidInput, "object cloud normals and points differ in count");
    }
    for (Eigen::Index i = 0; i < normals->rows(); ++i) {
      const double n = normals->row(i).norm();
      if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-6) {
        fail(ErrorCode::kInvalidInput, "object cloud normal " + std::to_string(i) + " is not unit");
      }
    }
  }
}

VertexMatrix estimate_normals(const VertexMatrix& points, int neighbours) {
  const Eigen::Index n = points.rows();
  if (n < 3) fail(ErrorCode::kInvalidInput, "normal estimation needs at least 3 points");
  const Point3 centroid = points.colwise().mean().transpose();
  const int k = std::min<int>(neighbours, static_cast<int>(n));
  VertexMatrix normals(n, 3);
  std::vector<std::pair<double, Eigen::Index>> dist(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) dist[j] = {(points.row(j) - points.row(i)).squaredNorm(), j};
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    Point3 mean = Point3::Zero();
    for (int q = 0; q < k; ++q) mean += points.row(dist[q].second).transpose();
    mean /= k;
    Mat3 cov = Mat3::Zero();
    for (int q = 0; q < k; ++q) {
      const Vec3 d = points.row(dist[q].second).transpose() - mean;
      cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
    Vec3 nrm = eig.eigenvectors().col(0);
    if (nrm.dot(points.row(i).transpose() - centroid) < 0.0) nrm = -nrm;
    normals.row(i) = nrm.normalized().transpose();
  }
  return normals;
}

ObjectCloud make_cylinder_cloud(std::string name, double radius, double height, int around,
                                int rings) {
  std::vector<Vec3> pts, nrm;
  for (int r = 0; r < rings; ++r) {
    const double z = height * (r + 0.5) / rings;
    for (int a = 0; a < around; ++a) {
      const double phi = 2.0 * std::numbers::pi * a / around;
      pts.emplace_back(radius * std::cos(phi), radius * std::sin(phi), z);
      nrm.emplace_back(std::cos(phi), std::sin(phi), 0.0);
    }
  }
  // caps: concentric rings strictly inside the rim
  for (int cap = 0; cap < 2; ++cap) {
    const double z = cap == 0 ? 0.0 : height;
    const Vec3 n(0.0, 0.0, cap == 0 ? -1.0 : 1.0);
    pts.emplace_back(0.0, 0.0, z);
    nrm.push_back(n);
    for (int ring = 1; ring <= 2; ++ring) {
      const double rr = radius * ring / 3.0;
      const int count = 8 * ring;
      for (int a = 0; a < count; ++a) {
        const double phi = 2.0 * std::numbers::pi * a / count;
        pts.emplace_back(rr * std::cos(phi), rr * std::sin(phi), z);
        nrm.push_back(n);
      }
    }
  }
  ObjectCloud cloud{std::move(name), VertexMatrix(pts.size(), 3), VertexMatrix(pts.size(), 3)};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    cloud.points.row(i) = pts[i].transpose();
    cloud.normals->row(i) = nrm[i].transpose();
  }
  return cloud;
}

ObjectCloud make_box_cloud(std::string name, double size_x, double size_y, double size_z,
                           double spacing) {
  std::vector<Vec3> pts, nrm;
  const Vec3 half(size_x / 2, size_y / 2, size_z / 2);
  const Vec3 centre(0.0, 0.0, size_z / 2);
  // for each axis, two faces; sample the other two axes on a grid that
  // stays off the edges
  for (int axis = 0; axis < 3; ++axis) {
    const int u = (axis + 1) % 3;
    const int v = (axis + 2) % 3;
    const int nu = std::max(1, static_cast<int>(std::floor(2 * half[u] / spacing)));
    const int nv = std::max(1, static_cast<int>(std::floor(2 * half[v] / spacing)));
    for (int side = -1; side <= 1; side += 2) {
      for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
          Vec3 p;
          p[axis] = side * half[axis];
          p[u] = -half[u] + 2 * half[u] * (i + 0.5) / nu;
          p[v] = -half[v] + 2 * half[v] * (j + 0.5) / nv;
          Vec3 n = Vec3::Zero();
          n[axis] = side;
          pts.push_back(p + centre);
          nrm.push_back(n);
        }
      }
    }
  }
  ObjectCloud cloud{std::move(name), VertexMatrix(pts.size(), 3), VertexMatrix(pts.size(), 3)};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    cloud.points.row(i) = pts[i].transpose();
    cloud.normals->row(i) = nrm[i].transpose();
  }
  return cloud;
}

}  // namespace handover
