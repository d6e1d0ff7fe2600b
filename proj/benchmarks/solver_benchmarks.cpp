#include <benchmark/benchmark.h>

#include <random>

#include "ilr/amr.hpp"
#include "ilr/bench.hpp"
#include "ilr/qp.hpp"
#include "ilr/reconstruction.hpp"

namespace {

using namespace ilr;

std::vector<double> double_sine_field(const Mesh& m) {
  std::vector<double> u(m.num_cells());
  for (int c = 0; c < m.num_cells(); ++c) u[c] = cell_average(m, c, double_sine);
  return u;
}

void BM_SolveQP(benchmark::State& state) {
  const Mesh m = jittered_mesh(32, 32, {}, SideKinds::periodic(), 0.15, 2);
  std::vector<double> u(m.num_cells());
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (double& v : u) v = U(rng);
  std::vector<QPProblem> problems;
  for (int c = 0; c < m.num_cells(); ++c) problems.push_back(assemble_interior_qp(m, u, c));
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_qp(problems[k]));
    k = (k + 1) % problems.size();
  }
}
BENCHMARK(BM_SolveQP);

void BM_Reconstruct(benchmark::State& state) {
  const auto method = static_cast<ReconstructionMethod>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const Mesh m = uniform_mesh(n, n, {}, SideKinds::periodic());
  const std::vector<double> u = double_sine_field(m);
  ReconstructedField out;
  for (auto _ : state) {
    reconstruct(m, u, method, out);
    benchmark::DoNotOptimize(out.trace.data());
  }
  state.SetItemsProcessed(state.iterations() * m.num_cells());
  state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_Reconstruct)->ArgsProduct({{0, 1, 2}, {32, 64}})->Unit(benchmark::kMicrosecond);

void BM_ScalarStep(benchmark::State& state) {
  const CaseSetup s = setup_case(CaseId::DoubleSine, static_cast<int>(state.range(0)));
  ScalarSystem system(s.mesh, s.scalar, ReconstructionMethod::ILR);
  std::vector<double> u = s.scalar_initial;
  const double dt = compute_dt(system, s.policy);
  for (auto _ : state) advance_scalar(system, u, 0.0, dt, Integrator::SspRk2);
  state.SetItemsProcessed(state.iterations() * s.mesh.num_cells());
}
BENCHMARK(BM_ScalarStep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_EulerStep(benchmark::State& state) {
  const CaseSetup s = setup_case(CaseId::DoubleMach, static_cast<int>(state.range(0)));
  EulerSystem system(s.mesh, s.gas, s.flux, ReconstructionMethod::ILR, s.boundary);
  EulerStepper stepper(system, s.policy, s.integrator);
  std::vector<EulerState> u = s.euler_initial;
  double t = 0.0;
  for (auto _ : state) t += stepper.step(u, t, 1.0).dt;
  state.SetItemsProcessed(state.iterations() * s.mesh.num_cells());
}
BENCHMARK(BM_EulerStep)->Arg(16)->Arg(35)->Unit(benchmark::kMillisecond);

void BM_Adapt(benchmark::State& state) {
  const Mesh background = uniform_mesh(40, 20, {{0.0, 0.0}, {2.0, 1.0}});
  const IdealGas gas;
  for (auto _ : state) {
    state.PauseTiming();
    RefinementForest forest(background, 1);
    std::vector<EulerState> u(forest.mesh().num_cells());
    for (int c = 0; c < forest.mesh().num_cells(); ++c) {
      const Vec2 x = forest.mesh().cell(c).centroid;
      u[c] = gas.to_conserved(Primitive{1.0, 0.0, 0.0, x.x + 0.3 * x.y < 1.0 ? 10.0 : 1.0});
    }
    const auto flags = flag_cells(forest.mesh(), u, gas, 0.2);
    state.ResumeTiming();
    forest.adapt(flags, u, gas);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(BM_Adapt)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
