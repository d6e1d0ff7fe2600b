#pragma once

#include <iosfwd>
#include <string>

#include "ilr/mesh.hpp"

namespace ilr {

// Text format:
//
//   vertices N / cells M
//   x y                      (N lines)
//   k v1 ... vk tag          (M lines, 0-based vertex ids, k = 3 or 4)
//   edge va vb kind          (boundary edges; untagged ones default to wall)
//   periodic tx ty           (optional, one per translation)
//
// Lines starting with '#' are comments.

Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh_file(const Mesh& mesh, const std::string& path);

}  // namespace ilr
