#include "handover/scene_export.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "handover/serialization.hpp"

namespace handover {

namespace {

struct Rgb {
  double r, g, b;
};

constexpr Rgb kObjectColor{0.85, 0.55, 0.20};
constexpr Rgb kHandColor{0.93, 0.76, 0.65};
constexpr Rgb kGripperColor{0.35, 0.45, 0.80};

class ObjWriter {
 public:
  void comment(const std::string& s) { out_ << "# " << s << "\n"; }
  void group(const char* name) { out_ << "g " << name << "\n"; }

  void vertex(const Vec3& p, const Rgb& c) {
    if (!p.allFinite()) fail(ErrorCode::kInvalidInput, "scene geometry is not finite");
    std::snprintf(buf_, sizeof buf_, "v %.9g %.9g %.9g %.3f %.3f %.3f\n", p.x(), p.y(), p.z(), c.r,
                  c.g, c.b);
    out_ << buf_;
    ++count_;
  }

  void normal(const Vec3& n) {
    std::snprintf(buf_, sizeof buf_, "vn %.9g %.9g %.9g\n", n.x(), n.y(), n.z());
    out_ << buf_;
  }

  // OBJ indices are 1-based and global.
  void face(long a, long b, long c) { out_ << "f " << a << " " << b << " " << c << "\n"; }
  void points(long first, long n) {
    out_ << "p";
    for (long i = 0; i < n; ++i) out_ << " " << first + i;
    out_ << "\n";
  }

  long count() const { return count_; }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  char buf_[160];
  long count_ = 0;
};

}  // namespace

std::string scene_obj(const HandoverConfiguration& config, const FaceList& hand_faces,
                      const SceneOptions& options) {
  if (options.sphere_stacks < 2 || options.sphere_slices < 3) {
    fail(ErrorCode::kInvalidInput, "sphere tessellation needs >= 2 stacks and >= 3 slices");
  }
  ObjWriter w;
  w.comment("handover scene: " + config.task.object + ", " +
            std::string(to_string(config.task.handedness)) + " hand");

  // object point set; vn only when the cloud carries normals
  w.group("object");
  const long obj_first = w.count() + 1;
  const long obj_n = static_cast<long>(config.object.points.rows());
  for (long i = 0; i < obj_n; ++i) w.vertex(config.object.points.row(i).transpose(), kObjectColor);
  if (config.object.normals) {
    for (long i = 0; i < obj_n; ++i) w.normal(config.object.normals->row(i).transpose());
  }
  w.points(obj_first, obj_n);

  w.group("hand");
  const long hand_first = w.count() + 1;
  const long hand_n = static_cast<long>(config.hand.vertices.rows());
  for (long i = 0; i < hand_n; ++i) w.vertex(config.hand.vertices.row(i).transpose(), kHandColor);
  if (hand_faces.empty()) {
    w.points(hand_first, hand_n);
  } else {
    for (const auto& f : hand_faces) {
      for (int idx : f) {
        if (idx < 0 || idx >= hand_n) fail(ErrorCode::kInvalidInput, "hand face index out of range");
      }
      w.face(hand_first + f[0], hand_first + f[1], hand_first + f[2]);
    }
  }

  w.group("gripper");
  const int stacks = options.sphere_stacks;
  const int slices = options.sphere_slices;
  for (const Sphere& s : place_gripper(config.grasp, options.gripper)) {
    // poles plus (stacks - 1) rings
    const long first = w.count() + 1;
    w.vertex(s.centre + Vec3(0, 0, s.radius), kGripperColor);
    for (int i = 1; i < stacks; ++i) {
      const double phi = std::numbers::pi * i / stacks;
      for (int j = 0; j < slices; ++j) {
        const double th = 2.0 * std::numbers::pi * j / slices;
        w.vertex(s.centre + s.radius * Vec3(std::sin(phi) * std::cos(th),
                                            std::sin(phi) * std::sin(th), std::cos(phi)),
                 kGripperColor);
      }
    }
    w.vertex(s.centre - Vec3(0, 0, s.radius), kGripperColor);
    const long south = w.count();
    auto ring = [&](int i, int j) { return first + 1 + (i - 1) * slices + (j % slices); };
    for (int j = 0; j < slices; ++j) w.face(first, ring(1, j), ring(1, j + 1));
    for (int i = 1; i + 1 < stacks; ++i) {
      for (int j = 0; j < slices; ++j) {
        w.face(ring(i, j), ring(i + 1, j), ring(i + 1, j + 1));
        w.face(ring(i, j), ring(i + 1, j + 1), ring(i, j + 1));
      }
    }
    for (int j = 0; j < slices; ++j) w.face(ring(stacks - 1, j), south, ring(stacks - 1, j + 1));
  }
  return w.str();
}

void export_scene(const HandoverConfiguration& config, const FaceList& hand_faces,
                  const std::filesystem::path& path, const SceneOptions& options) {
  write_text_file(path, scene_obj(config, hand_faces, options));
}

}  // namespace handover
