#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "ilr/amr.hpp"
#include "ilr/errors.hpp"
#include "ilr/mesh_generators.hpp"

namespace ilr {
namespace {

const IdealGas kGas;

std::vector<EulerState> step_pressure(const Mesh& m, double x_shock) {
  std::vector<EulerState> u(m.num_cells());
  for (int c = 0; c < m.num_cells(); ++c) {
    const double p = m.cell(c).centroid.x < x_shock ? 10.0 : 1.0;
    u[c] = kGas.to_conserved(Primitive{1.0, 0.0, 0.0, p});
  }
  return u;
}

template <class T>
T total(const Mesh& m, const std::vector<T>& u) {
  T s{};
  for (int c = 0; c < m.num_cells(); ++c) s += m.cell(c).area * u[c];
  return s;
}

/// Every edge joins leaves whose levels differ by at most one, and every
/// hanging node sits on a twin triangle.
void expect_one_level_rule(const RefinementForest& forest) {
  const Mesh& m = forest.mesh();
  for (const Edge& e : m.edges()) {
    if (e.is_boundary()) continue;
    const int a = m.face(e.faces[0]).cell, b = m.face(e.faces[1]).cell;
    EXPECT_LE(std::abs(forest.level(a) - forest.level(b)), 1);
  }
}

TEST(Amr, UniformPressureHasNoRefineFlags) {
  const Mesh m = uniform_mesh(8, 8);
  const std::vector<EulerState> u(m.num_cells(), kGas.to_conserved(Primitive{1.0, 0.3, 0.0, 2.0}));
  for (AdaptFlag f : flag_cells(m, u, kGas, 0.1)) EXPECT_NE(f, AdaptFlag::Refine);
}

TEST(Amr, InfiniteThresholdNeverRefines) {
  const Mesh m = uniform_mesh(8, 8);
  const auto u = step_pressure(m, 0.5);
  for (AdaptFlag f : flag_cells(m, u, kGas, std::numeric_limits<double>::infinity()))
    EXPECT_NE(f, AdaptFlag::Refine);
}

TEST(Amr, ShockFlagsFormConnectedBand) {
  const Mesh m = jittered_mesh(16, 16, {}, {}, 0.15, 4);
  const auto u = step_pressure(m, 0.52);
  const auto flags = flag_cells(m, u, kGas, 0.5);
  std::vector<int> flagged;
  bool left = false, right = false;
  for (int c = 0; c < m.num_cells(); ++c)
    if (flags[c] == AdaptFlag::Refine) {
      flagged.push_back(c);
      (m.cell(c).centroid.x < 0.52 ? left : right) = true;
    }
  ASSERT_FALSE(flagged.empty());
  EXPECT_TRUE(left && right);
  // Breadth-first search over vertex neighbors from a bottom cell must reach the top.
  std::vector<char> seen(m.num_cells(), 0);
  std::queue<int> q;
  double ymin = 1.0, ymax = 0.0;
  int start = flagged.front();
  for (int c : flagged)
    if (m.cell(c).centroid.y < m.cell(start).centroid.y) start = c;
  q.push(start);
  seen[start] = 1;
  while (!q.empty()) {
    const int c = q.front();
    q.pop();
    ymin = std::min(ymin, m.cell(c).centroid.y);
    ymax = std::max(ymax, m.cell(c).centroid.y);
    for (const StencilEntry& s : m.moore_stencil(c))
      if (!seen[s.cell] && flags[s.cell] == AdaptFlag::Refine) {
        seen[s.cell] = 1;
        q.push(s.cell);
      }
  }
  EXPECT_LT(ymin, 1.0 / 16);
  EXPECT_GT(ymax, 1.0 - 1.0 / 16);
}

TEST(Amr, NoFlagsIsIdentity) {
  RefinementForest forest(uniform_mesh(6, 6), 2);
  std::vector<double> u(forest.mesh().num_cells());
  for (int c = 0; c < forest.mesh().num_cells(); ++c) u[c] = std::sin(3.0 * forest.mesh().cell(c).centroid.x);
  const auto before = u;
  const std::vector<AdaptFlag> flags(u.size(), AdaptFlag::Keep);
  EXPECT_FALSE(forest.adapt(flags, u).changed());
  EXPECT_EQ(u, before);
  EXPECT_EQ(forest.mesh().num_cells(), 72);
}

TEST(Amr, RefiningOneCellMakesTwinNeighbors) {
  const Mesh background = uniform_mesh(6, 6);
  RefinementForest forest(background, 1);
  // An interior cell: lower triangle of quad (2, 2).
  const int target = 2 * (2 * 6 + 2);
  std::vector<AdaptFlag> flags(background.num_cells(), AdaptFlag::Keep);
  flags[target] = AdaptFlag::Refine;
  const AdaptReport r = forest.adapt(flags);
  EXPECT_EQ(r.refined, 1);
  const Mesh& m = forest.mesh();
  EXPECT_EQ(m.num_cells(), background.num_cells() + 3);
  int twins = 0, fine = 0;
  for (int c = 0; c < m.num_cells(); ++c) {
    twins += m.cell(c).twin;
    fine += forest.level(c) == 1;
  }
  EXPECT_EQ(twins, 3);
  EXPECT_EQ(fine, 4);
  EXPECT_NEAR(m.total_area(), 1.0, 1e-14);
  expect_one_level_rule(forest);
}

TEST(Amr, ClosureRefinesCellsWithTwoHangingNodes) {
  const Mesh background = uniform_mesh(6, 6);
  RefinementForest forest(background, 1);
  // Refine the neighbors across the bottom and right edges of the lower
  // triangle of quad (2,2); that triangle then has two hanging nodes.
  const int lower = 2 * (2 * 6 + 2), below = 2 * (1 * 6 + 2) + 1, right = 2 * (2 * 6 + 3) + 1;
  std::vector<AdaptFlag> flags(background.num_cells(), AdaptFlag::Keep);
  flags[below] = AdaptFlag::Refine;
  flags[right] = AdaptFlag::Refine;
  EXPECT_EQ(forest.adapt(flags).refined, 3);
  const Mesh& m = forest.mesh();
  const Vec2 center = background.cell(lower).centroid;
  for (int c = 0; c < m.num_cells(); ++c) {
    EXPECT_LE(m.cell(c).face_count(), 4);
    if (norm(m.cell(c).centroid - center) < 1e-12) EXPECT_EQ(forest.level(c), 1);
  }
  expect_one_level_rule(forest);
}

TEST(Amr, RoundTripConservesScalar) {
  RefinementForest forest(jittered_mesh(10, 10, {}, {}, 0.15, 8), 2);
  std::vector<double> u(forest.mesh().num_cells());
  for (int c = 0; c < forest.mesh().num_cells(); ++c) {
    const Vec2 x = forest.mesh().cell(c).centroid;
    u[c] = std::sin(2 * M_PI * x.x) * std::cos(2 * M_PI * x.y) + (x.x > 0.5 ? 1.0 : 0.0);
  }
  const double before = total(forest.mesh(), u);
  const int cells0 = forest.mesh().num_cells();
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<AdaptFlag> flags(u.size(), AdaptFlag::Keep);
    for (int c = 0; c < forest.mesh().num_cells(); ++c)
      if (std::abs(forest.mesh().cell(c).centroid.x - 0.5) < 0.2) flags[c] = AdaptFlag::Refine;
    forest.adapt(flags, u);
    EXPECT_NEAR(total(forest.mesh(), u), before, 1e-12 * std::abs(before));
    expect_one_level_rule(forest);
  }
  EXPECT_GT(forest.mesh().num_cells(), cells0);
  for (int pass = 0; pass < 3; ++pass) {
    const std::vector<AdaptFlag> flags(u.size(), AdaptFlag::Coarsen);
    forest.adapt(flags, u);
    EXPECT_NEAR(total(forest.mesh(), u), before, 1e-12 * std::abs(before));
    expect_one_level_rule(forest);
  }
  EXPECT_EQ(forest.mesh().num_cells(), cells0);
}

TEST(Amr, RandomAdaptationConservesEulerTotals) {
  RefinementForest forest(uniform_mesh(12, 6, {{0, 0}, {2, 1}}, {}), 2);
  std::vector<EulerState> u(forest.mesh().num_cells());
  for (int c = 0; c < forest.mesh().num_cells(); ++c) {
    const Vec2 x = forest.mesh().cell(c).centroid;
    u[c] = kGas.to_conserved(Primitive{1.0 + 0.5 * x.x, 0.3 * x.y, -0.2, x.x < 1.0 ? 5.0 : 0.1});
  }
  const EulerState before = total(forest.mesh(), u);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(-1, 1);
  for (int pass = 0; pass < 8; ++pass) {
    std::vector<AdaptFlag> flags(u.size());
    for (auto& f : flags) f = static_cast<AdaptFlag>(pick(rng));
    forest.adapt(flags, u, kGas);
    const EulerState after = total(forest.mesh(), u);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(after[i], before[i], 1e-12 * std::abs(before[i]));
    for (const EulerState& s : u) EXPECT_TRUE(kGas.admissible(s));
    expect_one_level_rule(forest);
  }
}

TEST(Amr, AdaptIsIdempotent) {
  RefinementForest forest(uniform_mesh(8, 8), 1);
  const auto flags_for = [&] {
    std::vector<AdaptFlag> flags(forest.mesh().num_cells(), AdaptFlag::Keep);
    for (int c = 0; c < forest.mesh().num_cells(); ++c)
      if (norm(forest.mesh().cell(c).centroid - Vec2{0.5, 0.5}) < 0.25) flags[c] = AdaptFlag::Refine;
    return flags;
  };
  EXPECT_TRUE(forest.adapt(flags_for()).changed());
  const int cells = forest.mesh().num_cells();
  EXPECT_FALSE(forest.adapt(flags_for()).changed());
  EXPECT_EQ(forest.mesh().num_cells(), cells);
}

TEST(Amr, ConformingRefinementIsTriangular) {
  const Mesh background = uniform_mesh(10, 10);
  const Mesh m = conforming_refinement(background, 2, [](const Vec2& x, int) { return norm(x) < 0.3; });
  EXPECT_GT(m.num_cells(), background.num_cells());
  for (const Cell& c : m.cells()) {
    EXPECT_EQ(c.vertex_count, 3);
    EXPECT_GT(c.area, 0.0);
  }
  EXPECT_NEAR(m.total_area(), 1.0, 1e-13);
}

TEST(Amr, RejectsPeriodicBackground) {
  EXPECT_THROW(RefinementForest(uniform_mesh(4, 4, {}, SideKinds::periodic()), 1), InputError);
}

}  // namespace
}  // namespace ilr
