#include "ilr/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>

#include "ilr/errors.hpp"

namespace ilr {

namespace {

constexpr double kSnapRelative = 1e-10;

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint32_t>(std::min(a, b));
  const auto hi = static_cast<std::uint32_t>(std::max(a, b));
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

struct PointHash {
  std::size_t operator()(const std::pair<long long, long long>& p) const {
    return std::hash<long long>()(p.first * 73856093LL ^ p.second * 19349663LL);
  }
};

/// Spatial lookup of points on a grid of spacing `tol`.
class PointIndex {
 public:
  explicit PointIndex(double tol) : tol_(tol) {}

  int find(const Vec2& p) const {
    const auto k = key(p);
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        const auto it = map_.find({k.first + dx, k.second + dy});
        if (it == map_.end()) continue;
        for (const auto& [q, id] : it->second) {
          if (std::abs(q.x - p.x) <= tol_ && std::abs(q.y - p.y) <= tol_) return id;
        }
      }
    }
    return -1;
  }

  void insert(const Vec2& p, int id) { map_[key(p)].emplace_back(p, id); }

 private:
  std::pair<long long, long long> key(const Vec2& p) const {
    return {std::llround(p.x / tol_), std::llround(p.y / tol_)};
  }

  double tol_;
  std::unordered_map<std::pair<long long, long long>, std::vector<std::pair<Vec2, int>>, PointHash>
      map_;
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) { return 0.5 * cross(b - a, c - a); }

}  // namespace

std::string_view to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::Interior: return "interior";
    case BoundaryKind::Wall: return "wall";
    case BoundaryKind::Symmetry: return "symmetry";
    case BoundaryKind::Inflow: return "inflow";
    case BoundaryKind::Outflow: return "outflow";
    case BoundaryKind::Dirichlet: return "dirichlet";
    case BoundaryKind::Periodic: return "periodic";
  }
  return "unknown";
}

std::optional<BoundaryKind> parse_boundary_kind(std::string_view name) {
  for (auto k : {BoundaryKind::Interior, BoundaryKind::Wall, BoundaryKind::Symmetry,
                 BoundaryKind::Inflow, BoundaryKind::Outflow, BoundaryKind::Dirichlet,
                 BoundaryKind::Periodic}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (const auto& c : cells_) sum += c.area;
  return sum;
}

Mesh Mesh::build(std::vector<Vec2> vertices, std::span<const std::vector<int>> cells,
                 const BoundarySpec& boundary, std::span<const int> cell_tags) {
  Mesh mesh;
  if (cells.empty()) throw MeshError("mesh has no cells");
  if (!cell_tags.empty() && cell_tags.size() != cells.size())
    throw MeshError("cell tag count does not match cell count");

  // Bounding box and snapping tolerance.
  Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Vec2 hi{-lo.x, -lo.y};
  for (const auto& v : vertices) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
  }
  mesh.diameter_ = norm(hi - lo);
  const double tol = kSnapRelative * std::max(mesh.diameter_, 1e-300);

  // Merge coincident vertices.
  std::vector<int> remap(vertices.size());
  {
    PointIndex index(tol);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const int found = index.find(vertices[i]);
      if (found >= 0) {
        remap[i] = found;
      } else {
        remap[i] = static_cast<int>(mesh.vertices_.size());
        index.insert(vertices[i], remap[i]);
        mesh.vertices_.push_back(vertices[i]);
      }
    }
  }
  const auto& P = mesh.vertices_;
  const int nv = static_cast<int>(P.size());

  // Cells.
  mesh.cells_.reserve(cells.size());
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const auto& list = cells[ci];
    const std::string where = "cell " + std::to_string(ci);
    if (list.size() != 3 && list.size() != 4)
      throw MeshError(where + ": expected 3 or 4 vertices, got " + std::to_string(list.size()));
    std::array<int, 4> v{-1, -1, -1, -1};
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (list[k] < 0 || static_cast<std::size_t>(list[k]) >= remap.size())
        throw MeshError(where + ": vertex index out of range");
      v[k] = remap[list[k]];
    }
    Cell cell;
    cell.tag = cell_tags.empty() ? 0 : cell_tags[ci];
    if (list.size() == 3) {
      cell.vertex_count = 3;
      cell.vertices = v;
    } else {
      // Find the hanging vertex: collinear with its two polygon neighbors.
      int hanging = -1;
      for (int k = 0; k < 4; ++k) {
        const Vec2& prev = P[v[(k + 3) % 4]];
        const Vec2& mid = P[v[k]];
        const Vec2& next = P[v[(k + 1) % 4]];
        const Vec2 chord = next - prev;
        if (std::abs(cross(mid - prev, chord)) <= 1e-9 * dot(chord, chord)) {
          if (norm(mid - 0.5 * (prev + next)) > 1e-9 * norm(chord))
            throw MeshError(where + ": hanging node is not the midpoint of its edge");
          hanging = k;
          break;
        }
      }
      if (hanging < 0) throw MeshError(where + ": 4-vertex cell is not a twin triangle");
      // Order as (A, B, C, M) with M the midpoint of C-A.
      for (int k = 0; k < 4; ++k) cell.vertices[k] = v[(hanging + 1 + k) % 4];
      cell.vertex_count = 4;
      cell.twin = true;
    }
    const auto& cv = cell.vertices;
    const double area = signed_area(P[cv[0]], P[cv[1]], P[cv[2]]);
    double scale = 0.0;
    for (int k = 0; k < 3; ++k) scale = std::max(scale, norm(P[cv[(k + 1) % 3]] - P[cv[k]]));
    if (std::abs(area) <= 1e-14 * scale * scale) throw MeshError(where + ": zero area");
    if (area < 0.0) throw MeshError(where + ": clockwise orientation");
    cell.area = area;
    cell.centroid = (P[cv[0]] + P[cv[1]] + P[cv[2]]) / 3.0;
    mesh.cells_.push_back(cell);
  }

  // Faces and edges.
  const int ncells = static_cast<int>(mesh.cells_.size());
  std::unordered_map<std::uint64_t, int> edge_of;
  edge_of.reserve(ncells * 2);
  for (int c = 0; c < ncells; ++c) {
    Cell& cell = mesh.cells_[c];
    cell.first_face = static_cast<int>(mesh.faces_.size());
    const int J = cell.vertex_count;
    for (int j = 0; j < J; ++j) {
      const int a = cell.vertices[j];
      const int b = cell.vertices[(j + 1) % J];
      Face f;
      f.cell = c;
      const Vec2 d = P[b] - P[a];
      f.length = norm(d);
      f.midpoint = 0.5 * (P[a] + P[b]);
      f.normal = Vec2{d.y, -d.x} / f.length;
      f.weight = (cell.twin && j >= 2) ? 1.0 / 6.0 : 1.0 / 3.0;
      const int fid = static_cast<int>(mesh.faces_.size());
      const auto key = edge_key(a, b);
      const auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        Edge e;
        e.vertices = {a, b};
        e.faces = {fid, -1};
        f.edge = static_cast<int>(mesh.edges_.size());
        edge_of.emplace(key, f.edge);
        mesh.edges_.push_back(e);
      } else {
        Edge& e = mesh.edges_[it->second];
        if (e.faces[1] >= 0)
          throw MeshError("non-manifold edge (" + std::to_string(a) + ", " + std::to_string(b) +
                          ")");
        if (e.vertices[0] != b || e.vertices[1] != a)
          throw MeshError("inconsistent orientation across edge (" + std::to_string(a) + ", " +
                          std::to_string(b) + ")");
        e.faces[1] = fid;
        f.edge = it->second;
      }
      cell.perimeter += f.length;
      mesh.faces_.push_back(f);
    }
    cell.inscribed_diameter = 4.0 * cell.area / cell.perimeter;
  }

  // Boundary kinds.
  std::unordered_map<std::uint64_t, BoundaryKind> tagged;
  for (const auto& t : boundary.tags) {
    if (t.v0 < 0 || t.v1 < 0 || static_cast<std::size_t>(t.v0) >= remap.size() ||
        static_cast<std::size_t>(t.v1) >= remap.size())
      throw MeshError("boundary tag references an invalid vertex");
    tagged[edge_key(remap[t.v0], remap[t.v1])] = t.kind;
  }
  std::vector<int> periodic_edges;
  for (int e = 0; e < static_cast<int>(mesh.edges_.size()); ++e) {
    Edge& edge = mesh.edges_[e];
    if (!edge.is_boundary()) continue;
    const auto it = tagged.find(edge_key(edge.vertices[0], edge.vertices[1]));
    edge.kind = it != tagged.end() ? it->second : boundary.default_kind;
    if (edge.kind == BoundaryKind::Interior)
      throw MeshError("boundary edge tagged interior");
    if (edge.kind == BoundaryKind::Periodic) periodic_edges.push_back(e);
  }

  // Pair periodic edges by translation and merge each pair into one edge.
  UnionFind vertex_class(nv);
  std::vector<char> dead(mesh.edges_.size(), 0);
  if (!periodic_edges.empty()) {
    if (boundary.periodic_translations.empty())
      throw MeshError("periodic edges present but no periodic translation given");
    PointIndex index(tol);
    for (int e : periodic_edges) {
      const Edge& edge = mesh.edges_[e];
      index.insert(0.5 * (P[edge.vertices[0]] + P[edge.vertices[1]]), e);
    }
    std::vector<int> partner(mesh.edges_.size(), -1);
    for (int e : periodic_edges) {
      if (partner[e] >= 0) continue;
      const Edge& edge = mesh.edges_[e];
      const Vec2 mid = 0.5 * (P[edge.vertices[0]] + P[edge.vertices[1]]);
      int match = -1;
      for (const auto& T : boundary.periodic_translations) {
        for (double sign : {1.0, -1.0}) {
          const int cand = index.find(mid + sign * T);
          if (cand >= 0 && cand != e && partner[cand] < 0) {
            match = cand;
            break;
          }
        }
        if (match >= 0) break;
      }
      if (match < 0) throw MeshError("unmatched periodic edge " + std::to_string(e));
      partner[e] = match;
      partner[match] = e;
    }
    for (int e : periodic_edges) {
      const int m = partner[e];
      if (m < e) continue;
      Edge& keep = mesh.edges_[e];
      const Edge& gone = mesh.edges_[m];
      keep.faces[1] = gone.faces[0];
      keep.periodic_vertices = gone.vertices;
      mesh.faces_[gone.faces[0]].edge = e;
      dead[m] = 1;
      // Opposite traversal: keep (a0->a1) matches gone (b0->b1) with a0~b1, a1~b0.
      vertex_class.unite(keep.vertices[0], gone.vertices[1]);
      vertex_class.unite(keep.vertices[1], gone.vertices[0]);
    }
    // Compact.
    std::vector<int> new_id(mesh.edges_.size(), -1);
    std::vector<Edge> compact;
    compact.reserve(mesh.edges_.size());
    for (std::size_t e = 0; e < mesh.edges_.size(); ++e) {
      if (dead[e]) continue;
      new_id[e] = static_cast<int>(compact.size());
      compact.push_back(mesh.edges_[e]);
    }
    for (auto& f : mesh.faces_) f.edge = new_id[f.edge];
    mesh.edges_ = std::move(compact);
    mesh.periodic_translations_ = boundary.periodic_translations;
  }

  // Edge geometry and face adjacency.
  for (auto& edge : mesh.edges_) {
    const Face& owner = mesh.faces_[edge.faces[0]];
    edge.midpoint = owner.midpoint;
    edge.normal = owner.normal;
    edge.length = owner.length;
    if (edge.faces[1] >= 0) {
      Face& f0 = mesh.faces_[edge.faces[0]];
      Face& f1 = mesh.faces_[edge.faces[1]];
      f0.neighbor = f1.cell;
      f0.twin_face = edge.faces[1];
      f1.neighbor = f0.cell;
      f1.twin_face = edge.faces[0];
      f0.neighbor_shift = f0.midpoint - f1.midpoint;
      f1.neighbor_shift = f1.midpoint - f0.midpoint;
    }
  }

  // Boundary vertices (physical boundaries only).
  std::vector<char> on_boundary(nv, 0);
  for (const auto& edge : mesh.edges_) {
    if (!edge.is_boundary()) continue;
    on_boundary[vertex_class.find(edge.vertices[0])] = 1;
    on_boundary[vertex_class.find(edge.vertices[1])] = 1;
  }

  // Moore stencils through vertex classes.
  std::vector<std::vector<std::pair<int, int>>> incident(nv);  // class -> (cell, vertex)
  for (int c = 0; c < ncells; ++c) {
    const Cell& cell = mesh.cells_[c];
    for (int k = 0; k < cell.vertex_count; ++k)
      incident[vertex_class.find(cell.vertices[k])].emplace_back(c, cell.vertices[k]);
  }
  mesh.moore_offsets_.assign(ncells + 1, 0);
  std::vector<StencilEntry> scratch;
  for (int c = 0; c < ncells; ++c) {
    Cell& cell = mesh.cells_[c];
    scratch.clear();
    for (int k = 0; k < cell.vertex_count; ++k) {
      const int v = cell.vertices[k];
      const int cls = vertex_class.find(v);
      if (on_boundary[cls]) cell.touches_boundary = true;
      for (const auto& [other, w] : incident[cls]) {
        Vec2 shift = P[v] - P[w];
        if (std::abs(shift.x) <= tol) shift.x = 0.0;
        if (std::abs(shift.y) <= tol) shift.y = 0.0;
        if (other == c && shift == Vec2{}) continue;
        scratch.push_back({other, shift});
      }
    }
    std::sort(scratch.begin(), scratch.end(), [](const StencilEntry& a, const StencilEntry& b) {
      if (a.cell != b.cell) return a.cell < b.cell;
      if (a.shift.x != b.shift.x) return a.shift.x < b.shift.x;
      return a.shift.y < b.shift.y;
    });
    scratch.erase(std::unique(scratch.begin(), scratch.end(),
                              [](const StencilEntry& a, const StencilEntry& b) {
                                return a.cell == b.cell && a.shift == b.shift;
                              }),
                  scratch.end());
    mesh.moore_.insert(mesh.moore_.end(), scratch.begin(), scratch.end());
    mesh.moore_offsets_[c + 1] = static_cast<int>(mesh.moore_.size());
  }
  return mesh;
}

std::vector<std::optional<int>> von_neumann_neighbors(const Mesh& mesh, int cell) {
  std::vector<std::optional<int>> out;
  for (const Face& f : mesh.faces(cell)) {
    if (f.neighbor >= 0)
      out.emplace_back(f.neighbor);
    else
      out.emplace_back(std::nullopt);
  }
  return out;
}

std::vector<int> moore_neighbors(const Mesh& mesh, int cell) {
  std::vector<int> out;
  for (const auto& s : mesh.moore_stencil(cell)) {
    if (s.cell != cell && (out.empty() || out.back() != s.cell)) out.push_back(s.cell);
  }
  return out;
}

double min_inscribed_diameter(const Mesh& mesh) {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& c : mesh.cells()) h = std::min(h, c.inscribed_diameter);
  return h;
}

}  // namespace ilr
