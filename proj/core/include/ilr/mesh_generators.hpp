#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ilr/mesh.hpp"

namespace ilr {

struct Rect {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{1.0, 1.0};
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
};

struct SideKinds {
  BoundaryKind left = BoundaryKind::Wall;
  BoundaryKind right = BoundaryKind::Wall;
  BoundaryKind bottom = BoundaryKind::Wall;
  BoundaryKind top = BoundaryKind::Wall;

  static SideKinds all(BoundaryKind k) { return {k, k, k, k}; }
  static SideKinds periodic() { return all(BoundaryKind::Periodic); }
};

/// Tags every edge used by exactly one cell with `kind_at(midpoint)`.
BoundarySpec classify_boundary(std::span<const Vec2> vertices,
                               std::span<const std::vector<int>> cells,
                               const std::function<BoundaryKind(const Vec2&)>& kind_at);

/// (nx+1) x (ny+1) logically structured nodes; each quad split along its
/// (i,j)-(i+1,j+1) diagonal. Periodic sides use the translation between the
/// opposite corner nodes.
Mesh structured_mesh(int nx, int ny, const std::function<Vec2(int, int)>& node,
                     const SideKinds& sides);

/// Uniform "nx x ny x 2" diagonal triangulation of a rectangle.
Mesh uniform_mesh(int nx, int ny, const Rect& rect = {}, const SideKinds& sides = {});

/// Uniform mesh whose interior nodes are moved by up to `fraction` of the
/// spacing in each direction (uniform random, fixed seed).
Mesh jittered_mesh(int nx, int ny, const Rect& rect, const SideKinds& sides, double fraction,
                   std::uint64_t seed);

}  // namespace ilr
