#include "ilr/amr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ilr/errors.hpp"

namespace ilr {
namespace {

std::uint64_t key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

}  // namespace

void AmrSettings::validate() const {
  if (!(threshold > 0.0)) throw InputError("amr threshold must be positive");
  if (interval < 1) throw InputError("amr interval must be at least 1");
  if (max_level < 0 || max_level > 2) throw InputError("amr max_level must lie in [0, 2]");
}

std::vector<double> pressure_jump(const Mesh& mesh, std::span<const EulerState> u, const IdealGas& gas) {
  std::vector<double> p(mesh.num_cells()), jump(mesh.num_cells(), 0.0);
  for (int c = 0; c < mesh.num_cells(); ++c) p[c] = gas.pressure(u[c]);
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (const Face& f : mesh.faces(c))
      if (f.neighbor >= 0)
        jump[c] = std::max(jump[c], std::abs(p[c] - p[f.neighbor]) / std::min(p[c], p[f.neighbor]));
  return jump;
}

std::vector<AdaptFlag> flag_cells(const Mesh& mesh, std::span<const EulerState> u, const IdealGas& gas,
                                  double threshold) {
  const std::vector<double> jump = pressure_jump(mesh, u, gas);
  std::vector<AdaptFlag> flags(mesh.num_cells(), AdaptFlag::Keep);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (jump[c] > threshold) flags[c] = AdaptFlag::Refine;
    else if (jump[c] < 0.25 * threshold) flags[c] = AdaptFlag::Coarsen;
  }
  return flags;
}

RefinementForest::RefinementForest(const Mesh& background, int max_level) : max_level_(max_level) {
  if (max_level < 0) throw InputError("max_level must be non-negative");
  vertices_.assign(background.vertices().begin(), background.vertices().end());
  for (const Cell& c : background.cells()) {
    if (c.vertex_count != 3) throw InputError("refinement needs a triangular background mesh");
    Node n;
    n.v = {c.vertices[0], c.vertices[1], c.vertices[2]};
    nodes_.push_back(n);
  }
  for (const Edge& e : background.edges()) {
    if (e.kind == BoundaryKind::Periodic) throw InputError("refinement of periodic meshes is not supported");
    if (e.is_boundary()) boundary_[key(e.vertices[0], e.vertices[1])] = e.kind;
  }
  num_roots_ = static_cast<int>(nodes_.size());
  collect_leaves(leaves_);
  rebuild();
}

int RefinementForest::find_midpoint(int a, int b) const {
  const auto it = midpoints_.find(key(a, b));
  return it == midpoints_.end() ? -1 : it->second;
}

int RefinementForest::midpoint(int a, int b) {
  const std::uint64_t k = key(a, b);
  if (const auto it = midpoints_.find(k); it != midpoints_.end()) return it->second;
  const int m = static_cast<int>(vertices_.size());
  vertices_.push_back(0.5 * (vertices_[a] + vertices_[b]));
  midpoints_.emplace(k, m);
  if (const auto it = boundary_.find(k); it != boundary_.end()) {
    const BoundaryKind kind = it->second;
    boundary_[key(a, m)] = kind;
    boundary_[key(m, b)] = kind;
  }
  return m;
}

void RefinementForest::split(int node) {
  nodes_[node].split = true;
  if (nodes_[node].first_child >= 0) return;
  const auto [a, b, c] = nodes_[node].v;
  const int mab = midpoint(a, b), mbc = midpoint(b, c), mca = midpoint(c, a);
  const int level = nodes_[node].level + 1;
  const int first = static_cast<int>(nodes_.size());
  const std::array<std::array<int, 3>, 4> kids{{{a, mab, mca}, {mab, b, mbc}, {mca, mbc, c}, {mab, mbc, mca}}};
  for (const auto& v : kids) {
    Node n;
    n.v = v;
    n.level = level;
    n.parent = node;
    nodes_.push_back(n);
  }
  nodes_[node].first_child = first;
}

void RefinementForest::collect_leaves(std::vector<int>& out) const {
  out.clear();
  std::vector<int> stack;
  for (int r = 0; r < num_roots_; ++r) {
    stack.push_back(r);
    while (!stack.empty()) {
      const int n = stack.back();
      stack.pop_back();
      if (!nodes_[n].split) {
        out.push_back(n);
        continue;
      }
      for (int k = 3; k >= 0; --k) stack.push_back(nodes_[n].first_child + k);
    }
  }
}

std::vector<char> RefinementForest::used_vertices(const std::vector<int>& leaves) const {
  std::vector<char> used(vertices_.size(), 0);
  for (int n : leaves)
    for (int v : nodes_[n].v) used[v] = 1;
  return used;
}

RefinementForest::EdgeCheck RefinementForest::inspect(int node, const std::vector<char>& used) const {
  EdgeCheck check;
  const auto& v = nodes_[node].v;
  for (int j = 0; j < 3; ++j) {
    const int a = v[j], b = v[(j + 1) % 3];
    const int m = find_midpoint(a, b);
    if (m < 0 || !used[m]) continue;
    ++check.hanging;
    check.edge = j;
    check.mid = m;
    const int m1 = find_midpoint(a, m), m2 = find_midpoint(m, b);
    if ((m1 >= 0 && used[m1]) || (m2 >= 0 && used[m2])) check.deep = true;
  }
  return check;
}

Vec2 RefinementForest::centroid(int node) const {
  const auto& v = nodes_[node].v;
  return (1.0 / 3.0) * (vertices_[v[0]] + vertices_[v[1]] + vertices_[v[2]]);
}

AdaptReport RefinementForest::plan(std::span<const AdaptFlag> flags) {
  if (flags.size() != leaves_.size()) throw InputError("flag count does not match the mesh");
  AdaptReport report;
  std::vector<int> leaf_of(nodes_.size(), -1);
  for (std::size_t i = 0; i < leaves_.size(); ++i) leaf_of[leaves_[i]] = static_cast<int>(i);

  // Parents whose four children are leaves flagged for coarsening.
  std::vector<int> candidates;
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    const Node& n = nodes_[leaves_[i]];
    if (n.parent < 0 || leaves_[i] != nodes_[n.parent].first_child) continue;
    bool all = true;
    for (int k = 0; k < 4 && all; ++k) {
      const int child = nodes_[n.parent].first_child + k;
      all = leaf_of[child] >= 0 && flags[leaf_of[child]] == AdaptFlag::Coarsen;
    }
    if (all) candidates.push_back(n.parent);
  }

  const std::vector<int> current = leaves_;
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (flags[i] != AdaptFlag::Refine || nodes_[current[i]].level >= max_level_) continue;
    split(current[i]);
    ++report.refined;
  }

  // Closure: at most one hanging node per leaf and one level between neighbors.
  std::vector<int> leaves;
  for (bool again = report.refined > 0; again;) {
    again = false;
    collect_leaves(leaves);
    const std::vector<char> used = used_vertices(leaves);
    for (int n : leaves) {
      const EdgeCheck check = inspect(n, used);
      if (check.hanging < 2 && !check.deep) continue;
      if (nodes_[n].level >= max_level_) throw Error("refinement closure exceeded the maximum level");
      split(n);
      ++report.refined;
      again = true;
    }
  }

  std::vector<int> active;
  for (int p : candidates) {
    bool leaves_only = true;
    for (int k = 0; k < 4; ++k) leaves_only = leaves_only && !nodes_[nodes_[p].first_child + k].split;
    if (!leaves_only) continue;
    nodes_[p].split = false;
    active.push_back(p);
  }
  for (bool again = !active.empty(); again;) {
    again = false;
    collect_leaves(leaves);
    const std::vector<char> used = used_vertices(leaves);
    for (int& p : active) {
      if (p < 0) continue;
      const EdgeCheck check = inspect(p, used);
      if (check.hanging < 2 && !check.deep) continue;
      nodes_[p].split = true;
      p = -1;
      again = true;
    }
  }
  report.coarsened = static_cast<int>(std::count_if(active.begin(), active.end(), [](int p) { return p >= 0; }));
  return report;
}

RefinementForest::Transfer RefinementForest::transfer_map(const std::vector<int>& old_leaf) const {
  Transfer t;
  collect_leaves(t.leaves);
  t.kept.assign(t.leaves.size(), -1);
  t.source.assign(t.leaves.size(), -1);
  for (std::size_t k = 0; k < t.leaves.size(); ++k) {
    const int n = t.leaves[k];
    if (n < static_cast<int>(old_leaf.size()) && old_leaf[n] >= 0) {
      t.kept[k] = old_leaf[n];
      continue;
    }
    for (int a = nodes_[n].parent; a >= 0; a = nodes_[a].parent)
      if (a < static_cast<int>(old_leaf.size()) && old_leaf[a] >= 0) {
        t.source[k] = old_leaf[a];
        break;
      }
  }
  return t;
}

void RefinementForest::rebuild() {
  const std::vector<char> used = used_vertices(leaves_);
  std::vector<int> id(vertices_.size(), -1);
  std::vector<Vec2> points;
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    if (used[v]) {
      id[v] = static_cast<int>(points.size());
      points.push_back(vertices_[v]);
    }
  std::vector<std::vector<int>> cells;
  cells.reserve(leaves_.size());
  for (int n : leaves_) {
    const auto& v = nodes_[n].v;
    const EdgeCheck check = inspect(n, used);
    if (check.hanging > 1) throw Error("leaf with more than one hanging node");
    if (check.hanging == 0) {
      cells.push_back({id[v[0]], id[v[1]], id[v[2]]});
    } else {
      // Rotate so that the hanging edge runs from C to A.
      const int j = check.edge;
      const int A = v[(j + 1) % 3], B = v[(j + 2) % 3], C = v[j];
      cells.push_back({id[A], id[B], id[C], id[check.mid]});
    }
  }
  BoundarySpec spec;
  for (const auto& [k, kind] : boundary_) {
    const int a = static_cast<int>(k >> 32), b = static_cast<int>(k & 0xffffffffu);
    if (used[a] && used[b]) spec.tags.push_back({id[a], id[b], kind});
  }
  mesh_ = Mesh::build(std::move(points), cells, spec);
}

AdaptReport RefinementForest::adapt(std::span<const AdaptFlag> flags) {
  const AdaptReport report = plan(flags);
  if (report.changed()) {
    collect_leaves(leaves_);
    rebuild();
  }
  return report;
}

namespace {

template <class T>
T area_mean(const Mesh& mesh, std::span<const T> u, std::span<const int> cells) {
  T sum{};
  double area = 0.0;
  for (int c : cells) {
    sum += mesh.cell(c).area * u[c];
    area += mesh.cell(c).area;
  }
  return (1.0 / area) * sum;
}

}  // namespace

AdaptReport RefinementForest::adapt(std::span<const AdaptFlag> flags, std::vector<double>& u) {
  if (u.size() != leaves_.size()) throw InputError("field size does not match the mesh");
  std::vector<int> old_leaf(nodes_.size(), -1);
  for (std::size_t i = 0; i < leaves_.size(); ++i) old_leaf[leaves_[i]] = static_cast<int>(i);
  const AdaptReport report = plan(flags);
  if (!report.changed()) return report;

  const Transfer t = transfer_map(old_leaf);
  std::vector<double> out(t.leaves.size());
  ReconstructedField r;
  if (std::any_of(t.source.begin(), t.source.end(), [](int s) { return s >= 0; }))
    reconstruct(mesh_, u, ReconstructionMethod::ILR, r);
  for (std::size_t k = 0; k < t.leaves.size(); ++k) {
    const int n = t.leaves[k];
    if (t.kept[k] >= 0) {
      out[k] = u[t.kept[k]];
    } else if (const int s = t.source[k]; s >= 0) {
      out[k] = u[s] + dot(r.gradient[s], centroid(n) - mesh_.cell(s).centroid);
    } else {
      std::array<int, 4> kids;
      for (int c = 0; c < 4; ++c) kids[c] = old_leaf[nodes_[n].first_child + c];
      out[k] = area_mean<double>(mesh_, u, kids);
    }
  }
  leaves_ = t.leaves;
  rebuild();
  u.swap(out);
  return report;
}

AdaptReport RefinementForest::adapt(std::span<const AdaptFlag> flags, std::vector<EulerState>& u,
                                    const IdealGas& gas) {
  if (u.size() != leaves_.size()) throw InputError("field size does not match the mesh");
  std::vector<int> old_leaf(nodes_.size(), -1);
  for (std::size_t i = 0; i < leaves_.size(); ++i) old_leaf[leaves_[i]] = static_cast<int>(i);
  const AdaptReport report = plan(flags);
  if (!report.changed()) return report;

  const Transfer t = transfer_map(old_leaf);
  std::vector<EulerState> out(t.leaves.size());
  std::vector<std::vector<int>> children_of(u.size());
  for (std::size_t k = 0; k < t.leaves.size(); ++k)
    if (t.source[k] >= 0) children_of[t.source[k]].push_back(static_cast<int>(k));

  std::array<ReconstructedField, 4> r;
  if (std::any_of(t.source.begin(), t.source.end(), [](int s) { return s >= 0; })) {
    std::vector<double> comp(u.size());
    for (int i = 0; i < 4; ++i) {
      for (std::size_t c = 0; c < u.size(); ++c) comp[c] = u[c][i];
      reconstruct(mesh_, comp, ReconstructionMethod::ILR, r[i]);
    }
  }
  for (std::size_t s = 0; s < u.size(); ++s) {
    if (children_of[s].empty()) continue;
    const Vec2 x0 = mesh_.cell(static_cast<int>(s)).centroid;
    // Scale the conservative gradient until every child is admissible.
    for (double scale = 1.0;; scale *= 0.5) {
      if (scale < 1.0 / 1024.0) scale = 0.0;
      bool ok = true;
      for (int k : children_of[s]) {
        const Vec2 d = centroid(t.leaves[k]) - x0;
        EulerState w = u[s];
        for (int i = 0; i < 4; ++i) w[i] += scale * dot(r[i].gradient[s], d);
        out[k] = w;
        ok = ok && gas.admissible(w);
      }
      if (ok || scale == 0.0) break;
    }
  }
  for (std::size_t k = 0; k < t.leaves.size(); ++k) {
    const int n = t.leaves[k];
    if (t.kept[k] >= 0) {
      out[k] = u[t.kept[k]];
    } else if (t.source[k] < 0) {
      std::array<int, 4> kids;
      for (int c = 0; c < 4; ++c) kids[c] = old_leaf[nodes_[n].first_child + c];
      out[k] = area_mean<EulerState>(mesh_, u, kids);
    }
  }
  leaves_ = t.leaves;
  rebuild();
  u.swap(out);
  return report;
}

Mesh conforming_refinement(const Mesh& background, int levels,
                           const std::function<bool(const Vec2&, int)>& select) {
  RefinementForest forest(background, levels);
  for (int pass = 0; pass < levels; ++pass) {
    const Mesh& m = forest.mesh();
    std::vector<AdaptFlag> flags(m.num_cells(), AdaptFlag::Keep);
    for (int c = 0; c < m.num_cells(); ++c)
      if (select(m.cell(c).centroid, forest.level(c))) flags[c] = AdaptFlag::Refine;
    forest.adapt(flags);
  }
  const Mesh& m = forest.mesh();
  std::vector<std::vector<int>> cells;
  for (const Cell& c : m.cells()) {
    const auto& v = c.vertices;
    if (c.twin) {
      cells.push_back({v[0], v[1], v[3]});
      cells.push_back({v[3], v[1], v[2]});
    } else {
      cells.push_back({v[0], v[1], v[2]});
    }
  }
  BoundarySpec spec;
  for (const Edge& e : m.edges())
    if (e.is_boundary()) spec.tags.push_back({e.vertices[0], e.vertices[1], e.kind});
  return Mesh::build(std::vector<Vec2>(m.vertices().begin(), m.vertices().end()), cells, spec);
}

}  // namespace ilr
