#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ilr/bench.hpp"
#include "ilr/errors.hpp"

namespace ilr {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Sedov, EnergyConstantAndShockRadius) {
  const SedovSolution sedov(1.4);
  EXPECT_NEAR(sedov.alpha(), 0.851072, 1e-5);
  EXPECT_NEAR(sedov.shock_radius(kSedovEnergy, 1.0, 1.0), 1.0, 1e-5);
}

TEST(Sedov, StrongShockJumpBehindFront) {
  const SedovSolution sedov(1.4);
  const double t = 1.0, R = sedov.shock_radius(kSedovEnergy, 1.0, t), D = 0.4 * R / t;
  const Primitive w = sedov.state(R * (1.0 - 1e-9), kSedovEnergy, 1.0, t);
  EXPECT_NEAR(w.rho, 6.0, 1e-5);
  EXPECT_NEAR(w.u, 2.0 / 2.4 * D, 1e-5);
  EXPECT_NEAR(w.p, 2.0 / 2.4 * D * D, 1e-5);
  const Primitive ahead = sedov.state(1.01 * R, kSedovEnergy, 1.0, t);
  EXPECT_EQ(ahead.rho, 1.0);
  EXPECT_EQ(ahead.p, 0.0);
}

TEST(Sedov, ProfileCarriesTheBlastEnergy) {
  const SedovSolution sedov(1.4);
  const double t = 0.7, E = 2.0;
  const double R = sedov.shock_radius(E, 1.0, t);
  const int n = 20000;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = (i + 0.5) / n * R;
    const Primitive w = sedov.state(r, E, 1.0, t);
    total += 4.0 * kPi * r * r * (0.5 * w.rho * w.u * w.u + w.p / 0.4) * R / n;
  }
  EXPECT_NEAR(total, E, 2e-3 * E);
}

TEST(Sedov, CornerCellsHoldHalfTheEnergy) {
  // Mirror symmetry about z = 0: the quarter plane holds E0 / 2.
  const CaseSetup s = setup_case(CaseId::Sedov, 40);
  double energy = 0.0;
  for (int c = 0; c < s.mesh.num_cells(); ++c) energy += 2.0 * kPi * s.mesh.cell(c).area * s.euler_initial[c].E;
  EXPECT_NEAR(energy, 0.5 * kSedovEnergy, 1e-9);
  EXPECT_TRUE(s.axisymmetric);
  EXPECT_EQ(s.flux, FluxKind::LocalLaxFriedrichs);
  EXPECT_EQ(s.mesh.num_cells(), 3200);
}

TEST(Sedov, ShockRadiusOfSyntheticShell) {
  const Mesh m = uniform_mesh(60, 60, {{0.0, 0.0}, {1.2, 1.2}});
  std::vector<EulerState> u(m.num_cells());
  for (int c = 0; c < m.num_cells(); ++c) {
    const double r = norm(m.cell(c).centroid);
    u[c] = {r < 0.5 ? (r > 0.4 ? 4.0 : 0.5) : 1.0, 0.0, 0.0, 1.0};
  }
  EXPECT_NEAR(sedov_shock_radius(m, u, 0.02), 0.5, 0.02);
}

TEST(ExactSolution, DoubleSineReturnsAfterUnitTime) {
  for (const Vec2 x : {Vec2{0.1, 0.2}, Vec2{0.73, 0.41}, Vec2{0.5, 0.99}}) {
    EXPECT_NEAR(exact_solution(CaseId::DoubleSine, x, 1.0), double_sine(x), 1e-12);
    EXPECT_NEAR(exact_solution(CaseId::DoubleSine, x, 0.0), double_sine(x), 0.0);
  }
}

TEST(ExactSolution, RotationProfileAndFullTurn) {
  EXPECT_EQ(rotation_profile({0.45, 0.7}), 1.0);   // cylinder body
  EXPECT_EQ(rotation_profile({0.5, 0.75}), 0.0);   // inside the slot
  EXPECT_EQ(rotation_profile({0.5, 0.88}), 1.0);   // bridge above the slot
  EXPECT_NEAR(rotation_profile({0.5, 0.25}), 1.0, 1e-15);  // cone apex
  EXPECT_NEAR(rotation_profile({0.25, 0.5}), 0.5, 1e-15);  // hump top
  EXPECT_EQ(rotation_profile({0.9, 0.9}), 0.0);
  for (const Vec2 x : {Vec2{0.47, 0.31}, Vec2{0.31, 0.52}, Vec2{0.45, 0.7}})
    EXPECT_NEAR(exact_solution(CaseId::SolidBodyRotation, x, 2.0 * kPi), rotation_profile(x), 1e-12);
  // A quarter turn counterclockwise carries the hump to (0.5, 0.25).
  EXPECT_NEAR(exact_solution(CaseId::SolidBodyRotation, {0.5, 0.25}, 0.5 * kPi), 0.5, 1e-12);
}

TEST(ExactSolution, EulerCasesHaveNone) {
  EXPECT_THROW(exact_solution(CaseId::DoubleMach, {0.5, 0.5}, 0.1), InputError);
  EXPECT_THROW(exact_solution(CaseId::ForwardStep, {0.5, 0.5}, 0.1), InputError);
}

TEST(ErrorNorms, ProjectionAndOffset) {
  const Mesh m = jittered_mesh(8, 8, {}, SideKinds::periodic(), 0.15, 3);
  std::vector<double> u(m.num_cells());
  for (int c = 0; c < m.num_cells(); ++c) u[c] = cell_average(m, c, double_sine);
  ErrorReport r = error_norms(m, u, double_sine);
  EXPECT_EQ(r.l1, 0.0);
  EXPECT_EQ(r.linf, 0.0);
  for (double& v : u) v += 1e-3;
  r = error_norms(m, u, double_sine);
  EXPECT_NEAR(r.l1, 1e-3, 1e-15);
  EXPECT_NEAR(r.linf, 1e-3, 1e-15);
}

TEST(ErrorNorms, CellAverageExactForLinear) {
  const Mesh m = jittered_mesh(4, 4, {}, {}, 0.2, 9);
  for (int c = 0; c < m.num_cells(); ++c) {
    const Vec2 x0 = m.cell(c).centroid;
    EXPECT_NEAR(cell_average(m, c, [](const Vec2& x) { return 3.0 * x.x - 2.0 * x.y + 1.0; }),
                3.0 * x0.x - 2.0 * x0.y + 1.0, 1e-14);
  }
}

TEST(ErrorNorms, ObservedOrder) {
  EXPECT_NEAR(observed_order(4e-2, 1e-2, 512, 2048), 2.0, 1e-12);
  EXPECT_NEAR(observed_order(4e-2, 2e-2, 512, 2048), 1.0, 1e-12);
}

TEST(TotalVariation, ConstantIsZero) {
  const CaseSetup s = setup_case(CaseId::SolidBodyRotation, 6);
  ScalarSystem system(s.mesh, {rotation_velocity, [](const Vec2&, double) { return 2.0; }},
                      ReconstructionMethod::ILR);
  const std::vector<double> u(s.mesh.num_cells(), 2.0);
  EXPECT_NEAR(discrete_tv(system, u, 0.0), 0.0, 1e-14);
}

TEST(TotalVariation, TwoCellHandValue) {
  // Unit square split along its diagonal; cell 0 carries 1, cell 1 and the exterior 0.
  const Mesh m = uniform_mesh(1, 1);
  ASSERT_EQ(m.num_cells(), 2);
  const std::vector<Vec2> gradient(2);
  std::vector<double> inner(m.num_faces()), outer(m.num_faces());
  for (int f = 0; f < m.num_faces(); ++f) {
    inner[f] = m.face(f).cell == 0 ? 1.0 : 0.0;
    outer[f] = m.face(f).neighbor == 0 ? 1.0 : 0.0;
  }
  // The shared diagonal is seen from both cells, each boundary edge from one.
  EXPECT_NEAR(discrete_tv(m, gradient, inner, outer), 0.5 * (1.0 + 1.0) + std::sqrt(2.0), 1e-14);
}

TEST(StretchedMesh, NoStretchNoShiftIsUniform) {
  const Mesh a = stretched_mesh(5, 4, 1.0, 7, 0.0);
  const Mesh b = uniform_mesh(5, 4, {}, SideKinds::all(BoundaryKind::Dirichlet));
  ASSERT_EQ(a.num_vertices(), b.num_vertices());
  for (int v = 0; v < a.num_vertices(); ++v) EXPECT_LT(norm(a.vertex(v) - b.vertex(v)), 1e-14);
  ASSERT_EQ(a.num_cells(), b.num_cells());
}

TEST(StretchedMesh, GeometricRowsSymmetricAboutCentre) {
  const int nx = 20, ny = 40;
  const Mesh m = stretched_mesh(nx, ny, 1.2, 1);
  EXPECT_EQ(m.num_cells(), 2 * nx * ny);
  std::vector<double> h(ny);
  for (int j = 0; j < ny; ++j) h[j] = m.vertex((j + 1) * (nx + 1)).y - m.vertex(j * (nx + 1)).y;
  for (int j = 0; j < ny / 2 - 1; ++j) EXPECT_NEAR(h[j] / h[j + 1], 1.2, 1e-12) << j;
  for (int j = 0; j < ny; ++j) EXPECT_NEAR(h[j], h[ny - 1 - j], 1e-14);
  EXPECT_NEAR(h[ny / 2 - 1], h[ny / 2], 1e-15);
  EXPECT_NEAR(m.total_area(), 1.0, 1e-13);
}

TEST(StretchedMesh, PositiveAreasOverSeeds) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Mesh m = stretched_mesh(20, 40, 1.2, seed);
    double min_area = 1.0;
    for (const Cell& c : m.cells()) min_area = std::min(min_area, c.area);
    EXPECT_GT(min_area, 0.0) << seed;
  }
}

TEST(StretchedMesh, RejectsBadInput) {
  EXPECT_THROW(stretched_mesh(1, 4, 1.2, 0), InputError);
  EXPECT_THROW(stretched_mesh(4, 4, 0.9, 0), InputError);
  EXPECT_THROW(stretched_mesh(4, 4, 1.2, 0, 0.5), InputError);
}

TEST(DoubleMach, PostShockStateSatisfiesRankineHugoniot) {
  // Normal Mach 10 shock into gas at rest with rho = 1.4, p = 1 (sound speed 1).
  const IdealGas gas;
  const Primitive pre = double_mach_pre_shock(), post = double_mach_post_shock();
  const double g = gas.gamma, M = 10.0;
  EXPECT_NEAR(gas.sound_speed(pre), 1.0, 1e-14);
  const double rho2 = pre.rho * (g + 1) * M * M / ((g - 1) * M * M + 2);
  const double p2 = pre.p * (1 + 2 * g / (g + 1) * (M * M - 1));
  EXPECT_NEAR(post.rho, rho2, 1e-12);
  EXPECT_NEAR(post.p, p2, 1e-12);
  // Shock-frame mass, momentum and energy fluxes match across the front.
  const Vec2 n{std::cos(kPi / 6.0), -std::sin(kPi / 6.0)};
  const double S = M, w1 = -S, w2 = dot({post.u, post.v}, n) - S;
  EXPECT_NEAR(pre.rho * w1, post.rho * w2, 1e-10);
  EXPECT_NEAR(pre.rho * w1 * w1 + pre.p, post.rho * w2 * w2 + post.p, 1e-9);
  const auto h = [g](const Primitive& w, double v) { return g / (g - 1) * w.p / w.rho + 0.5 * v * v; };
  EXPECT_NEAR(h(pre, w1), h(post, w2), 1e-9);
  // No tangential velocity.
  EXPECT_NEAR(dot({post.u, post.v}, Vec2{-n.y, n.x}), 0.0, 1e-12);
}

TEST(DoubleMach, SetupBoundaryConvention) {
  const CaseSetup s = setup_case(CaseId::DoubleMach, 12);
  EXPECT_EQ(s.mesh.num_cells(), 2 * 48 * 12);
  EXPECT_NEAR(s.mesh.total_area(), 4.0, 1e-12);
  for (const Edge& e : s.mesh.edges()) {
    if (!e.is_boundary()) continue;
    const Vec2 m = e.midpoint;
    if (m.y < 1e-12) EXPECT_EQ(e.kind, m.x < 1.0 / 6.0 ? BoundaryKind::Dirichlet : BoundaryKind::Wall);
    if (m.x < 1e-12) EXPECT_EQ(e.kind, BoundaryKind::Inflow);
    if (m.x > 4.0 - 1e-12) EXPECT_EQ(e.kind, BoundaryKind::Outflow);
    if (m.y > 1.0 - 1e-12) EXPECT_EQ(e.kind, BoundaryKind::Dirichlet);
  }
  // The exact shock reaches x = 1/6 + (1 + 20 t) / sqrt(3) on the top edge.
  const double t = 0.1, xs = 1.0 / 6.0 + (1.0 + 20.0 * t) / std::sqrt(3.0);
  EXPECT_EQ(s.boundary.prescribed({xs - 1e-6, 1.0}, t), double_mach_post_shock());
  EXPECT_EQ(s.boundary.prescribed({xs + 1e-6, 1.0}, t), double_mach_pre_shock());
  EXPECT_EQ(s.end_time, 0.2);
}

TEST(ForwardStep, InflowIsMachThree) {
  const IdealGas gas;
  const Primitive w = forward_step_inflow();
  EXPECT_NEAR(w.u / gas.sound_speed(w), 3.0, 1e-14);
}

TEST(ForwardStep, MeshGeometryAndTags) {
  const Mesh bg = forward_step_mesh(10, 0);
  EXPECT_EQ(bg.num_cells(), 2 * (30 * 10 - 24 * 2));
  EXPECT_NEAR(bg.total_area(), 3.0 - 2.4 * 0.2, 1e-12);
  const Mesh m = forward_step_mesh(10, 1);
  EXPECT_GT(m.num_cells(), bg.num_cells());
  EXPECT_NEAR(m.total_area(), bg.total_area(), 1e-12);
  double min_area_near_corner = 1.0;
  for (const Cell& c : m.cells()) {
    EXPECT_FALSE(c.twin);
    if (norm(c.centroid - Vec2{0.6, 0.2}) < 0.1) min_area_near_corner = std::min(min_area_near_corner, c.area);
  }
  EXPECT_NEAR(min_area_near_corner, 0.5 * 0.01 / 4.0, 1e-12);
  for (const Edge& e : m.edges()) {
    if (!e.is_boundary()) continue;
    const BoundaryKind want = e.midpoint.x < 1e-12          ? BoundaryKind::Inflow
                              : e.midpoint.x > 3.0 - 1e-12 ? BoundaryKind::Outflow
                                                            : BoundaryKind::Wall;
    EXPECT_EQ(e.kind, want);
  }
  EXPECT_THROW(forward_step_mesh(12), InputError);
}

TEST(Setup, ScalarCases) {
  const CaseSetup ds = setup_case(CaseId::DoubleSine, 16);
  EXPECT_EQ(ds.mesh.num_cells(), 512);
  EXPECT_EQ(ds.end_time, 1.0);
  EXPECT_EQ(ds.policy.cfl, 0.3);
  EXPECT_EQ(ds.integrator, Integrator::SspRk2);
  const CaseSetup sb = setup_case(CaseId::SolidBodyRotation, 20);
  EXPECT_EQ(sb.mesh.num_cells(), 1600);
  ASSERT_TRUE(sb.policy.fixed_dt);
  EXPECT_NEAR(*sb.policy.fixed_dt, 0.6 * kPi * min_inscribed_diameter(sb.mesh), 1e-15);
  EXPECT_NEAR(sb.end_time, 2.0 * kPi, 1e-15);
}

TEST(Setup, InitialEulerStatesAdmissible) {
  for (CaseId id : {CaseId::DoubleMach, CaseId::ForwardStep, CaseId::Sedov}) {
    const CaseSetup s = setup_case(id, id == CaseId::DoubleMach ? 10 : id == CaseId::ForwardStep ? 10 : 20);
    ASSERT_EQ(static_cast<int>(s.euler_initial.size()), s.mesh.num_cells());
    EulerSystem system(s.mesh, s.gas, s.flux, ReconstructionMethod::ILR, s.boundary, s.axisymmetric);
    EXPECT_FALSE(system.first_inadmissible(s.euler_initial)) << to_string(id);
  }
}

TEST(Setup, CaseNamesRoundTrip) {
  for (CaseId id : {CaseId::DoubleSine, CaseId::SolidBodyRotation, CaseId::DoubleMach, CaseId::ForwardStep,
                    CaseId::Sedov})
    EXPECT_EQ(parse_case(to_string(id)), id);
  EXPECT_FALSE(parse_case("riemann"));
}

TEST(Runs, ScalarRunEndsExactlyAtEndTime) {
  const CaseSetup s = setup_case(CaseId::DoubleSine, 8);
  ScalarRunOptions options;
  options.end_time = 0.1;
  int calls = 0;
  options.on_step = [&](int, double, const std::vector<double>&) { ++calls; };
  const ScalarRunResult r = run_scalar(s, options);
  EXPECT_EQ(r.time, 0.1);
  EXPECT_EQ(calls, r.steps);
  EXPECT_GT(r.stats.solves, 0);
  EXPECT_NEAR(integral(s.mesh, r.u), integral(s.mesh, s.scalar_initial), 1e-14);
}

TEST(Runs, EulerRunStopsAfterMaxSteps) {
  const CaseSetup s = setup_case(CaseId::DoubleMach, 6);
  EulerRunOptions options;
  options.max_steps = 3;
  const EulerRunResult r = run_euler(s, options);
  EXPECT_EQ(r.steps, 3);
  EXPECT_GT(r.time, 0.0);
  EXPECT_EQ(r.mesh.num_cells(), s.mesh.num_cells());
  EXPECT_THROW(run_euler(setup_case(CaseId::DoubleSine, 4)), InputError);
}

TEST(Runs, AmrRunConservesBetweenSteps) {
  CaseSetup s = setup_case(CaseId::ForwardStep, 10);
  EulerRunOptions options;
  options.max_steps = 20;
  const EulerRunResult r = run_euler(s, options);
  EXPECT_GT(r.adaptations, 0);
  EXPECT_GT(r.max_cells, s.mesh.num_cells());
  EulerSystem system(r.mesh, s.gas, s.flux, ReconstructionMethod::ILR, s.boundary);
  EXPECT_FALSE(system.first_inadmissible(r.u));
}

TEST(Runs, ConvergenceStudyFillsOrders) {
  const int res[] = {8, 16};
  const auto levels = convergence_study(CaseId::DoubleSine, res, ReconstructionMethod::Unlimited);
  ASSERT_EQ(levels.size(), 2u);
  EXPECT_FALSE(levels[0].error.l1_order);
  ASSERT_TRUE(levels[1].error.l1_order);
  EXPECT_GT(*levels[1].error.l1_order, 1.5);
  const auto jittered = convergence_study(CaseId::DoubleSine, res, ReconstructionMethod::ILR, 0.15);
  EXPECT_LT(jittered[1].error.l1, jittered[0].error.l1);
}

}  // namespace
}  // namespace ilr
