#pragma once

// Point-cloud PLY: ASCII or binary little-endian, float32 x/y/z with
// optional nx/ny/nz. Other vertex properties and elements are skipped.

#include <filesystem>
#include <iosfwd>

#include "handover/object_cloud.hpp"

namespace handover {

enum class PlyEncoding { kAscii, kBinaryLittleEndian };

/// Errors: MalformedHeader, UnsupportedEncoding, InvalidInput (truncated or
/// non-finite data), IoError.
ObjectCloud read_ply(std::istream& in, std::string name);
ObjectCloud load_ply(const std::filesystem::path& path);

void write_ply(std::ostream& out, const ObjectCloud& cloud, PlyEncoding encoding);
void save_ply(const std::filesystem::path& path, const ObjectCloud& cloud,
              PlyEncoding encoding = PlyEncoding::kBinaryLittleEndian);

}  // namespace handover
