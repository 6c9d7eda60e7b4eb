#pragma once

// Wavefront OBJ dump of a handover configuration for offline viewing.
// Three groups: "object" (points), "hand" (mesh), "gripper" (tessellated
// proxy spheres). Vertex colors ride on the v lines (x y z r g b), which
// most viewers understand.

#include <filesystem>
#include <string>

#include "handover/pipeline.hpp"

namespace handover {

struct SceneOptions {
  GripperGeometry gripper = GripperGeometry::parallel_jaw();
  int sphere_stacks = 6;
  int sphere_slices = 10;
};

/// Deterministic: the same configuration always yields the same bytes.
/// `hand_faces` indexes the posed hand vertices; empty writes hand points.
std::string scene_obj(const HandoverConfiguration& config, const FaceList& hand_faces,
                      const SceneOptions& options = {});

void export_scene(const HandoverConfiguration& config, const FaceList& hand_faces,
                  const std::filesystem::path& path, const SceneOptions& options = {});

}  // namespace handover
