#pragma once
// ASCII PLY subset: a vertex element with x y z and optionally nx ny nz.
// Other vertex properties are skipped; elements after the vertices are
// ignored.
#include <filesystem>
#include <string>
#include <string_view>

#include "graspkit/point_cloud.hpp"

namespace graspkit {

/// Throws BadHeader for a malformed or unsupported header and CountMismatch
/// when the body holds fewer (or, with no later elements, more) vertex lines
/// than declared. Bad numbers throw MalformedLine with the line number.
PointCloud parse_ply(std::string_view text);
PointCloud read_ply(const std::filesystem::path& path);

/// Values are printed with 9 significant digits; normals are written when
/// the cloud has them.
std::string format_ply(const PointCloud& cloud);
void write_ply(const std::filesystem::path& path, const PointCloud& cloud);

}  // namespace graspkit
