#pragma once

#include <optional>
#include <string>

#include "handover/hand_model.hpp"

namespace handover {

/// Object point cloud in the object frame (meters).
struct ObjectCloud {
  std::string name;
  VertexMatrix points;
  std::optional<VertexMatrix> normals;  // unit rows, same count as points

  /// Throws InvalidInput when empty, non-finite, or normals are mis-sized or
  /// not unit within 1e-6.
  void validate() const;
  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
};

/// Unit normals from a PCA fit over the k nearest neighbours, oriented away
/// from the cloud centroid.
VertexMatrix estimate_normals(const VertexMatrix& points, int neighbours = 10);

/// Closed cylinder along +z with its base at z = 0, sampled with normals.
ObjectCloud make_cylinder_cloud(std::string name, double radius, double height,
                                int around = 24, int rings = 16);

/// Axis-aligned box with its base at z = 0 and centred in x/y, sampled on
/// face interiors with normals.
ObjectCloud make_box_cloud(std::string name, double size_x, double size_y, double size_z,
                           double spacing = 0.01);

}  // namespace handover
