#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ilr/geometry.hpp"

namespace ilr {

enum class BoundaryKind : std::uint8_t {
  Interior,
  Wall,
  Symmetry,
  Inflow,
  Outflow,
  Dirichlet,
  Periodic,
};

std::string_view to_string(BoundaryKind kind);
std::optional<BoundaryKind> parse_boundary_kind(std::string_view name);

/// One edge of one cell, seen from that cell. Faces of a cell are stored
/// contiguously in local edge order j = 0..J-1.
struct Face {
  int cell = -1;
  int edge = -1;
  /// Cell across the edge, -1 on a physical (non-periodic) boundary.
  int neighbor = -1;
  /// The neighbor's face on the same edge, -1 on a physical boundary.
  int twin_face = -1;
  /// Added to the neighbor's centroid to express it in this cell's frame
  /// (non-zero only across periodic edges).
  Vec2 neighbor_shift;
  Vec2 midpoint;
  /// Unit outward normal.
  Vec2 normal;
  double length = 0.0;
  /// Midpoint-rule weight: 1/3 on triangles, (1/3,1/3,1/6,1/6) on twin triangles.
  double weight = 0.0;
};

struct Cell {
  std::array<int, 4> vertices{-1, -1, -1, -1};
  int vertex_count = 0;
  int first_face = 0;
  Vec2 centroid;
  double area = 0.0;
  double perimeter = 0.0;
  /// 4 * area / perimeter.
  double inscribed_diameter = 0.0;
  /// Triangle with a hanging node on its third side; local faces 2 and 3 are the halves.
  bool twin = false;
  /// Some vertex lies on a physical boundary edge.
  bool touches_boundary = false;
  int tag = 0;

  int face_count() const { return vertex_count; }
};

struct Edge {
  std::array<int, 2> vertices{-1, -1};
  /// faces[0] owns the normal; faces[1] == -1 on a physical boundary.
  std::array<int, 2> faces{-1, -1};
  BoundaryKind kind = BoundaryKind::Interior;
  /// For periodic edges: vertex pair of the matched edge on the opposite side.
  std::array<int, 2> periodic_vertices{-1, -1};
  Vec2 midpoint;
  Vec2 normal;
  double length = 0.0;

  bool is_boundary() const { return faces[1] < 0; }
};

/// A cell in a reconstruction stencil, with the translation that brings it
/// next to the stencil center.
struct StencilEntry {
  int cell = -1;
  Vec2 shift;
};

struct BoundaryTag {
  int v0 = -1;
  int v1 = -1;
  BoundaryKind kind = BoundaryKind::Wall;
};

struct BoundarySpec {
  /// Kind given to boundary edges without an explicit tag.
  BoundaryKind default_kind = BoundaryKind::Wall;
  std::vector<BoundaryTag> tags;
  /// Edges tagged Periodic are paired by these translations (either sign).
  std::vector<Vec2> periodic_translations;
};

/// Immutable conforming polygonal mesh of triangles and twin triangles.
class Mesh {
 public:
  Mesh() = default;

  /// Builds adjacency and geometry. Cell vertex lists must be counterclockwise,
  /// with 3 entries (triangle) or 4 entries (twin triangle, one vertex being the
  /// midpoint of the opposite two). Throws MeshError on non-manifold edges,
  /// zero-area cells, inconsistent orientation or unmatched periodic edges.
  static Mesh build(std::vector<Vec2> vertices, std::span<const std::vector<int>> cells,
                    const BoundarySpec& boundary, std::span<const int> cell_tags = {});

  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }

  const Cell& cell(int c) const { return cells_[c]; }
  const Edge& edge(int e) const { return edges_[e]; }
  const Face& face(int f) const { return faces_[f]; }
  const Vec2& vertex(int v) const { return vertices_[v]; }

  std::span<const Cell> cells() const { return cells_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Face> faces() const { return faces_; }
  std::span<const Vec2> vertices() const { return vertices_; }
  std::span<const Face> faces(int c) const {
    return std::span<const Face>(faces_).subspan(cells_[c].first_face, cells_[c].vertex_count);
  }

  /// Cells sharing at least one vertex (periodic images included), sorted by cell id.
  std::span<const StencilEntry> moore_stencil(int c) const {
    return std::span<const StencilEntry>(moore_).subspan(moore_offsets_[c],
                                                         moore_offsets_[c + 1] - moore_offsets_[c]);
  }

  const std::vector<Vec2>& periodic_translations() const { return periodic_translations_; }
  double total_area() const;
  /// Bounding-box diagonal.
  double diameter() const { return diameter_; }

 private:
  std::vector<Vec2> vertices_;
  std::vector<Cell> cells_;
  std::vector<Edge> edges_;
  std::vector<Face> faces_;
  std::vector<StencilEntry> moore_;
  std::vector<int> moore_offsets_;
  std::vector<Vec2> periodic_translations_;
  double diameter_ = 0.0;
};

inline Mesh build_mesh(std::vector<Vec2> vertices, std::span<const std::vector<int>> cells,
                       const BoundarySpec& boundary) {
  return Mesh::build(std::move(vertices), cells, boundary);
}

/// Edge neighbors in local edge order; std::nullopt on physical boundary edges.
std::vector<std::optional<int>> von_neumann_neighbors(const Mesh& mesh, int cell);

/// Distinct cells sharing a vertex with `cell`, excluding the cell itself.
std::vector<int> moore_neighbors(const Mesh& mesh, int cell);

/// Minimum over cells of the inscribed diameter 4|T|/perimeter.
double min_inscribed_diameter(const Mesh& mesh);

}  // namespace ilr
