#include "ilr/mesh_generators.hpp"

#include <map>
#include <random>

#include "ilr/errors.hpp"

namespace ilr {

BoundarySpec classify_boundary(std::span<const Vec2> vertices,
                               std::span<const std::vector<int>> cells,
                               const std::function<BoundaryKind(const Vec2&)>& kind_at) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& cell : cells) {
    const int n = static_cast<int>(cell.size());
    for (int k = 0; k < n; ++k) {
      const int a = cell[k];
      const int b = cell[(k + 1) % n];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  }
  BoundarySpec spec;
  for (const auto& [key, n] : count) {
    if (n != 1) continue;
    const Vec2 mid = 0.5 * (vertices[key.first] + vertices[key.second]);
    spec.tags.push_back({key.first, key.second, kind_at(mid)});
  }
  return spec;
}

Mesh structured_mesh(int nx, int ny, const std::function<Vec2(int, int)>& node,
                     const SideKinds& sides) {
  if (nx < 1 || ny < 1) throw MeshError("structured mesh needs nx, ny >= 1");
  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<Vec2> vertices;
  vertices.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) vertices.push_back(node(i, j));

  std::vector<std::vector<int>> cells;
  cells.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }

  BoundarySpec spec;
  for (int i = 0; i < nx; ++i) {
    spec.tags.push_back({id(i, 0), id(i + 1, 0), sides.bottom});
    spec.tags.push_back({id(i, ny), id(i + 1, ny), sides.top});
  }
  for (int j = 0; j < ny; ++j) {
    spec.tags.push_back({id(0, j), id(0, j + 1), sides.left});
    spec.tags.push_back({id(nx, j), id(nx, j + 1), sides.right});
  }
  const bool px = sides.left == BoundaryKind::Periodic || sides.right == BoundaryKind::Periodic;
  const bool py = sides.bottom == BoundaryKind::Periodic || sides.top == BoundaryKind::Periodic;
  if (px) {
    if (sides.left != sides.right) throw MeshError("periodic x needs both left and right periodic");
    spec.periodic_translations.push_back(vertices[id(nx, 0)] - vertices[id(0, 0)]);
  }
  if (py) {
    if (sides.bottom != sides.top) throw MeshError("periodic y needs both bottom and top periodic");
    spec.periodic_translations.push_back(vertices[id(0, ny)] - vertices[id(0, 0)]);
  }
  return Mesh::build(std::move(vertices), cells, spec);
}

Mesh uniform_mesh(int nx, int ny, const Rect& rect, const SideKinds& sides) {
  const double dx = rect.width() / nx;
  const double dy = rect.height() / ny;
  return structured_mesh(
      nx, ny, [&](int i, int j) { return Vec2{rect.lo.x + i * dx, rect.lo.y + j * dy}; }, sides);
}

Mesh jittered_mesh(int nx, int ny, const Rect& rect, const SideKinds& sides, double fraction,
                   std::uint64_t seed) {
  if (fraction < 0.0 || fraction >= 0.25) throw MeshError("jitter fraction must lie in [0, 0.25)");
  const double dx = rect.width() / nx;
  const double dy = rect.height() / ny;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Vec2> shift((nx + 1) * (ny + 1));
  for (int j = 1; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const double sx = unit(rng) * fraction * dx;
      const double sy = unit(rng) * fraction * dy;
      shift[j * (nx + 1) + i] = {sx, sy};
    }
  return structured_mesh(
      nx, ny,
      [&](int i, int j) {
        return Vec2{rect.lo.x + i * dx, rect.lo.y + j * dy} + shift[j * (nx + 1) + i];
      },
      sides);
}

}  // namespace ilr
