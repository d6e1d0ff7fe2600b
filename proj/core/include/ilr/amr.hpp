#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "ilr/mesh.hpp"
#include "ilr/physics.hpp"
#include "ilr/reconstruction.hpp"

namespace ilr {

struct AmrSettings {
  bool enabled = false;
  /// Relative pressure jump above which a cell is refined; cells below a
  /// quarter of it may be coarsened.
  double threshold = 0.2;
  /// Adapt every `interval` steps.
  int interval = 1;
  /// Levels of quadrisection below the background mesh.
  int max_level = 1;

  void validate() const;
};

enum class AdaptFlag : std::int8_t { Coarsen = -1, Keep = 0, Refine = 1 };

/// Pressure-jump indicator max_j |p_0 - p_j| / min(p_0, p_j) over edge
/// neighbors, using cell-average pressures. u holds conservative states.
std::vector<double> pressure_jump(const Mesh& mesh, std::span<const EulerState> u, const IdealGas& gas);
std::vector<AdaptFlag> flag_cells(const Mesh& mesh, std::span<const EulerState> u, const IdealGas& gas,
                                  double threshold);

struct AdaptReport {
  int refined = 0;
  int coarsened = 0;
  bool changed() const { return refined > 0 || coarsened > 0; }
};

/// Hierarchy of quadrisected triangles over a triangular background mesh.
/// Leaves form the current mesh; a leaf with a refined neighbor on one edge
/// becomes a twin triangle. Adjacent leaves never differ by more than one
/// level and no leaf has more than one hanging node.
class RefinementForest {
 public:
  /// Throws InputError if the background has twin cells or periodic edges.
  RefinementForest(const Mesh& background, int max_level);

  const Mesh& mesh() const { return mesh_; }
  int max_level() const { return max_level_; }
  /// Refinement level of each cell of mesh().
  int level(int cell) const { return nodes_[leaves_[cell]].level; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }

  /// Applies flags to the current cells. Conservative fields are transferred:
  /// new children take the averages of the parent's limited linear
  /// reconstruction, coarsened parents the area-weighted mean of their children.
  AdaptReport adapt(std::span<const AdaptFlag> flags, std::vector<double>& u);
  AdaptReport adapt(std::span<const AdaptFlag> flags, std::vector<EulerState>& u, const IdealGas& gas);
  /// Mesh-only adaptation (no fields).
  AdaptReport adapt(std::span<const AdaptFlag> flags);

 private:
  struct Node {
    std::array<int, 3> v{};
    int level = 0;
    int parent = -1;
    /// Children are allocated once and reused after coarsening.
    int first_child = -1;
    bool split = false;
  };

  struct EdgeCheck {
    int hanging = 0;
    int edge = -1;
    int mid = -1;
    /// A neighbor across some edge is two levels finer.
    bool deep = false;
  };

  int midpoint(int a, int b);
  int find_midpoint(int a, int b) const;
  void split(int node);
  /// Refines, closes and coarsens the tree; the mesh is not rebuilt.
  AdaptReport plan(std::span<const AdaptFlag> flags);
  void collect_leaves(std::vector<int>& out) const;
  std::vector<char> used_vertices(const std::vector<int>& leaves) const;
  EdgeCheck inspect(int node, const std::vector<char>& used) const;
  Vec2 centroid(int node) const;
  void rebuild();

  /// Leaves after plan(), the old cell of each surviving leaf, and the old
  /// cell whose reconstruction seeds each new child (-1 otherwise).
  struct Transfer {
    std::vector<int> leaves;
    std::vector<int> kept;
    std::vector<int> source;
  };
  Transfer transfer_map(const std::vector<int>& old_leaf) const;

  int max_level_;
  std::vector<Vec2> vertices_;
  std::vector<Node> nodes_;
  int num_roots_ = 0;
  std::unordered_map<std::uint64_t, int> midpoints_;
  std::unordered_map<std::uint64_t, BoundaryKind> boundary_;
  std::vector<int> leaves_;
  Mesh mesh_;
};

/// Conforming triangle mesh obtained by refining the cells selected by
/// `select(centroid, level)` up to `levels` times and splitting every twin
/// triangle along its median.
Mesh conforming_refinement(const Mesh& background, int levels,
                           const std::function<bool(const Vec2&, int)>& select);

}  // namespace ilr
