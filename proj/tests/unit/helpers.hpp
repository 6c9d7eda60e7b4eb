#pragma once

#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "handover/geometry.hpp"

namespace test {

using namespace handover;

inline Vec3 random_vec(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  return scale * Vec3(n(rng), n(rng), n(rng));
}

inline RotationMatrix random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return RotationMatrix(q.toRotationMatrix());
}

inline RigidTransform random_transform(std::mt19937_64& rng, double scale = 1.0) {
  return {random_rotation(rng), random_vec(rng, scale)};
}

inline HandFrame random_frame(std::mt19937_64& rng) {
  return build_frame(random_vec(rng), random_vec(rng), random_vec(rng));
}

template <typename Fn>
ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a handover::Error");
  return ErrorCode::kInvalidInput;
}

/// Scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("handover_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace test
