#include "ilr/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "ilr/errors.hpp"

namespace ilr {
namespace {

constexpr double kPi = std::numbers::pi;

/// Rebuilds `mesh` with boundary kinds chosen from the edge midpoint.
Mesh retag(const Mesh& mesh, const std::function<BoundaryKind(const Vec2&)>& kind_at) {
  std::vector<std::vector<int>> cells;
  cells.reserve(mesh.num_cells());
  for (const Cell& c : mesh.cells()) cells.emplace_back(c.vertices.begin(), c.vertices.begin() + c.vertex_count);
  std::vector<Vec2> vertices(mesh.vertices().begin(), mesh.vertices().end());
  const BoundarySpec spec = classify_boundary(vertices, cells, kind_at);
  return Mesh::build(std::move(vertices), cells, spec);
}

double rotation_shape(const Vec2& x, const Vec2& center, int kind) {
  constexpr double r0 = 0.15;
  const double r = norm(x - center) / r0;
  if (r > 1.0) return 0.0;
  switch (kind) {
    case 0:
      return (std::abs(x.x - center.x) >= 0.025 || x.y >= 0.85) ? 1.0 : 0.0;
    case 1:
      return 1.0 - r;
    default:
      return 0.25 * (1.0 + std::cos(kPi * r));
  }
}

}  // namespace

std::string_view to_string(CaseId id) {
  switch (id) {
    case CaseId::DoubleSine: return "double-sine";
    case CaseId::SolidBodyRotation: return "solid-body-rotation";
    case CaseId::DoubleMach: return "double-mach";
    case CaseId::ForwardStep: return "forward-step";
    case CaseId::Sedov: return "sedov";
  }
  return "unknown";
}

std::optional<CaseId> parse_case(std::string_view name) {
  for (CaseId id : {CaseId::DoubleSine, CaseId::SolidBodyRotation, CaseId::DoubleMach, CaseId::ForwardStep,
                    CaseId::Sedov})
    if (name == to_string(id)) return id;
  return std::nullopt;
}

bool is_euler(CaseId id) {
  return id == CaseId::DoubleMach || id == CaseId::ForwardStep || id == CaseId::Sedov;
}

double double_sine(const Vec2& x) { return std::sin(2 * kPi * x.x) * std::sin(2 * kPi * x.y); }
Vec2 double_sine_velocity(const Vec2&) { return {1.0, 2.0}; }

double rotation_profile(const Vec2& x) {
  return rotation_shape(x, {0.5, 0.75}, 0) + rotation_shape(x, {0.5, 0.25}, 1) + rotation_shape(x, {0.25, 0.5}, 2);
}

Vec2 rotation_velocity(const Vec2& x) { return {0.5 - x.y, x.x - 0.5}; }

double exact_solution(CaseId id, const Vec2& x, double t) {
  switch (id) {
    case CaseId::DoubleSine: {
      const Vec2 v = double_sine_velocity(x);
      return double_sine({x.x - v.x * t, x.y - v.y * t});
    }
    case CaseId::SolidBodyRotation: {
      const double c = std::cos(t), s = std::sin(t);
      const Vec2 d = x - Vec2{0.5, 0.5};
      return rotation_profile({0.5 + c * d.x + s * d.y, 0.5 - s * d.x + c * d.y});
    }
    default:
      throw InputError("case " + std::string(to_string(id)) + " has no pointwise exact solution");
  }
}

SedovSolution::SedovSolution(double gamma) : gamma_(gamma) {
  if (!(gamma > 1.0)) throw InputError("gamma must exceed 1");
  // u = R' f, rho = rho1 g, p = rho1 R'^2 h as functions of xi = r / R, R ~ t^(2/5).
  const auto rhs = [gamma](double xi, const std::array<double, 3>& y) {
    const double f = y[0], g = y[1], h = y[2], d = f - xi;
    // g f' + d g' = -2 f g / xi;  d f' + h' / g = 3 f / 2;  -gamma d g' / g + d h' / h = 3
    const std::array<std::array<double, 3>, 3> A{{{g, d, 0.0}, {d, 0.0, 1.0 / g}, {0.0, -gamma * d / g, d / h}}};
    const std::array<double, 3> b{-2.0 * f * g / xi, 1.5 * f, 3.0};
    const auto det3 = [](const std::array<std::array<double, 3>, 3>& M) {
      return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
             M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    };
    const double D = det3(A);
    std::array<double, 3> out{};
    for (int k = 0; k < 3; ++k) {
      auto M = A;
      for (int r = 0; r < 3; ++r) M[r][k] = b[r];
      out[k] = det3(M) / D;
    }
    return out;
  };
  std::array<double, 3> y{2.0 / (gamma + 1.0), (gamma + 1.0) / (gamma - 1.0), 2.0 / (gamma + 1.0)};
  const int n = 20000;
  const double xi_end = 1e-3;
  const double step = (1.0 - xi_end) / n;
  std::vector<double> xi{1.0}, f{y[0]}, g{y[1]}, h{y[2]};
  double x = 1.0;
  for (int i = 0; i < n; ++i) {
    const auto add = [](const std::array<double, 3>& a, const std::array<double, 3>& b, double s) {
      return std::array<double, 3>{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
    };
    const double dx = -step;
    const auto k1 = rhs(x, y);
    const auto k2 = rhs(x + 0.5 * dx, add(y, k1, 0.5 * dx));
    const auto k3 = rhs(x + 0.5 * dx, add(y, k2, 0.5 * dx));
    const auto k4 = rhs(x + dx, add(y, k3, dx));
    for (int k = 0; k < 3; ++k) y[k] += dx / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    x += dx;
    xi.push_back(x);
    f.push_back(y[0]);
    g.push_back(std::max(y[1], 0.0));
    h.push_back(y[2]);
  }
  // Store ascending in xi.
  xi_.assign(xi.rbegin(), xi.rend());
  f_.assign(f.rbegin(), f.rend());
  g_.assign(g.rbegin(), g.rend());
  h_.assign(h.rbegin(), h.rend());
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < xi_.size(); ++i) {
    const auto e = [&](std::size_t k) {
      return (0.5 * g_[k] * f_[k] * f_[k] + h_[k] / (gamma - 1.0)) * xi_[k] * xi_[k];
    };
    integral += 0.5 * (e(i) + e(i + 1)) * (xi_[i + 1] - xi_[i]);
  }
  alpha_ = 16.0 * kPi / 25.0 * integral;
}

double SedovSolution::shock_radius(double energy, double rho, double t) const {
  return std::pow(energy * t * t / (rho * alpha_), 0.2);
}

Primitive SedovSolution::state(double r, double energy, double rho, double t) const {
  const double R = shock_radius(energy, rho, t);
  if (r >= R) return {rho, 0.0, 0.0, 0.0};
  const double rdot = 0.4 * R / t;
  const double xi = std::max(r / R, xi_.front());
  const auto it = std::upper_bound(xi_.begin(), xi_.end(), xi);
  const std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - xi_.begin(), 1), xi_.size() - 1);
  const double s = (xi - xi_[i - 1]) / (xi_[i] - xi_[i - 1]);
  const auto lerp = [&](const std::vector<double>& v) { return v[i - 1] + s * (v[i] - v[i - 1]); };
  return {rho * lerp(g_), rdot * lerp(f_), 0.0, rho * rdot * rdot * lerp(h_)};
}

double cell_average(const Mesh& mesh, int cell, const std::function<double(const Vec2&)>& f) {
  double sum = 0.0;
  for (const Face& face : mesh.faces(cell)) sum += face.weight * f(face.midpoint);
  return sum;
}

ErrorReport error_norms(const Mesh& mesh, std::span<const double> u, const std::function<double(const Vec2&)>& exact) {
  ErrorReport r;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double e = std::abs(u[c] - cell_average(mesh, c, exact));
    r.l1 += mesh.cell(c).area * e;
    r.linf = std::max(r.linf, e);
  }
  return r;
}

double observed_order(double coarse_error, double fine_error, int coarse_cells, int fine_cells) {
  // h ~ cells^(-1/2) in two dimensions.
  return 2.0 * std::log(coarse_error / fine_error) / std::log(static_cast<double>(fine_cells) / coarse_cells);
}

double discrete_tv(const Mesh& mesh, std::span<const Vec2> gradient, std::span<const double> inner,
                   std::span<const double> outer) {
  double tv = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Cell& T = mesh.cell(c);
    double jumps = 0.0;
    for (int j = 0; j < T.face_count(); ++j) {
      const int f = T.first_face + j;
      jumps += std::abs(inner[f] - outer[f]) * mesh.face(f).length;
    }
    tv += norm(gradient[c]) * T.area + 0.5 * jumps;
  }
  return tv;
}

double discrete_tv(ScalarSystem& system, std::span<const double> u, double t) {
  system.prepare(u, t);
  const ReconstructedField& r = system.reconstruction();
  return discrete_tv(system.mesh(), r.gradient, r.trace, system.outer_trace());
}

Mesh stretched_mesh(int nx, int ny, double stretch, std::uint64_t seed, double shift, const SideKinds& sides) {
  if (nx < 2 || ny < 2) throw InputError("stretched mesh needs nx, ny >= 2");
  if (!(stretch >= 1.0)) throw InputError("stretch factor must be at least 1");
  if (!(shift >= 0.0 && shift < 0.5)) throw InputError("shift must lie in [0, 0.5)");
  // Row heights grow by `stretch` away from the centre line.
  std::vector<double> height(ny);
  const double mid = 0.5 * (ny - 1);
  double total = 0.0;
  for (int j = 0; j < ny; ++j) {
    height[j] = std::pow(stretch, std::abs(j - mid) - (ny % 2 == 0 ? 0.5 : 0.0));
    total += height[j];
  }
  std::vector<double> y(ny + 1, 0.0);
  for (int j = 0; j < ny; ++j) y[j + 1] = y[j] + height[j] / total;
  y[ny] = 1.0;
  const double dx = 1.0 / nx;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-shift, shift);
  std::vector<double> dxs((nx + 1) * (ny + 1), 0.0);
  for (int j = 1; j < ny; ++j)
    for (int i = 1; i < nx; ++i) dxs[j * (nx + 1) + i] = dist(rng) * dx;
  return structured_mesh(
      nx, ny, [&](int i, int j) { return Vec2{i * dx + dxs[j * (nx + 1) + i], y[j]}; }, sides);
}

Mesh forward_step_mesh(int n, int corner_levels, double corner_radius) {
  if (n < 5 || n % 5 != 0) throw InputError("forward step mesh needs a multiple of 5 cells per unit");
  const int nx = 3 * n, ny = n, step_i = 3 * n / 5, step_j = n / 5;
  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  const double d = 1.0 / n;
  std::vector<Vec2> vertices;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) vertices.push_back({i * d, j * d});
  std::vector<std::vector<int>> cells;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (i >= step_i && j < step_j) continue;
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  const double eps = 1e-9;
  const BoundarySpec spec = classify_boundary(vertices, cells, [eps](const Vec2& m) {
    if (m.x < eps) return BoundaryKind::Inflow;
    if (m.x > 3.0 - eps) return BoundaryKind::Outflow;
    return BoundaryKind::Wall;
  });
  Mesh background = Mesh::build(std::move(vertices), cells, spec);
  if (corner_levels <= 0) return background;
  const Vec2 corner{0.6, 0.2};
  return conforming_refinement(background, corner_levels, [&](const Vec2& x, int level) {
    return norm(x - corner) < corner_radius / (1 << level);
  });
}

Primitive double_mach_post_shock() {
  return {8.0, 8.25 * std::cos(kPi / 6.0), -8.25 * std::sin(kPi / 6.0), 116.5};
}
Primitive double_mach_pre_shock() { return {1.4, 0.0, 0.0, 1.0}; }
Primitive forward_step_inflow() { return {1.4, 3.0, 0.0, 1.0}; }

double sedov_corner_energy(double l) { return kSedovEnergy / (2.0 * kPi * l * l * l); }

int default_resolution(CaseId id) {
  switch (id) {
    case CaseId::DoubleSine: return 32;
    case CaseId::SolidBodyRotation: return 20;
    case CaseId::DoubleMach: return 35;
    case CaseId::ForwardStep: return 25;
    case CaseId::Sedov: return 40;
  }
  return 0;
}

CaseSetup setup_case(CaseId id, int resolution, std::uint64_t seed) {
  if (resolution < 2) throw InputError("resolution must be at least 2");
  CaseSetup s;
  s.id = id;
  switch (id) {
    case CaseId::DoubleSine: {
      s.mesh = uniform_mesh(resolution, resolution, {}, SideKinds::periodic());
      s.scalar.velocity = double_sine_velocity;
      s.end_time = 1.0;
      s.policy.cfl = 0.3;
      s.policy.rule = CflRule::Conventional;
      s.scalar_initial.resize(s.mesh.num_cells());
      for (int c = 0; c < s.mesh.num_cells(); ++c) s.scalar_initial[c] = cell_average(s.mesh, c, double_sine);
      break;
    }
    case CaseId::SolidBodyRotation: {
      s.mesh = stretched_mesh(resolution, 2 * resolution, 1.2, seed);
      s.scalar.velocity = rotation_velocity;
      s.end_time = 2.0 * kPi;
      s.policy.fixed_dt = 0.6 * kPi * min_inscribed_diameter(s.mesh);
      s.scalar_initial.resize(s.mesh.num_cells());
      for (int c = 0; c < s.mesh.num_cells(); ++c) s.scalar_initial[c] = cell_average(s.mesh, c, rotation_profile);
      break;
    }
    case CaseId::DoubleMach: {
      const double eps = 1e-9;
      s.mesh = retag(uniform_mesh(4 * resolution, resolution, {{0.0, 0.0}, {4.0, 1.0}}), [eps](const Vec2& m) {
        if (m.x < eps) return BoundaryKind::Inflow;
        if (m.x > 4.0 - eps) return BoundaryKind::Outflow;
        if (m.y > 1.0 - eps) return BoundaryKind::Dirichlet;
        return m.x < 1.0 / 6.0 ? BoundaryKind::Dirichlet : BoundaryKind::Wall;
      });
      const Primitive post = double_mach_post_shock(), pre = double_mach_pre_shock();
      s.boundary.prescribed = [post, pre](const Vec2& x, double t) {
        return x.x < 1.0 / 6.0 + (x.y + 20.0 * t) / std::sqrt(3.0) ? post : pre;
      };
      s.flux = FluxKind::HLLC;
      s.end_time = 0.2;
      s.policy.beta = 0.3;
      s.euler_initial.resize(s.mesh.num_cells());
      for (int c = 0; c < s.mesh.num_cells(); ++c)
        s.euler_initial[c] = s.gas.to_conserved(s.boundary.prescribed(s.mesh.cell(c).centroid, 0.0));
      break;
    }
    case CaseId::ForwardStep: {
      if (resolution % 5 != 0) throw InputError("forward-step resolution must be a multiple of 5");
      s.mesh = forward_step_mesh(resolution);
      const Primitive inflow = forward_step_inflow();
      s.boundary.prescribed = [inflow](const Vec2&, double) { return inflow; };
      s.flux = FluxKind::HLLC;
      s.end_time = 4.0;
      s.policy.beta = 0.3;
      s.amr.enabled = true;
      s.amr.max_level = 1;
      s.amr.threshold = 0.2;
      s.euler_initial.assign(s.mesh.num_cells(), s.gas.to_conserved(inflow));
      break;
    }
    case CaseId::Sedov: {
      const double side = 1.2, l = side / resolution;
      s.mesh = uniform_mesh(resolution, resolution, {{0.0, 0.0}, {side, side}},
                            {BoundaryKind::Symmetry, BoundaryKind::Outflow, BoundaryKind::Symmetry,
                             BoundaryKind::Outflow});
      s.axisymmetric = true;
      s.flux = FluxKind::LocalLaxFriedrichs;
      s.end_time = 1.0;
      s.policy.beta = 0.3;
      const double e_corner = sedov_corner_energy(l);
      s.euler_initial.resize(s.mesh.num_cells());
      for (int c = 0; c < s.mesh.num_cells(); ++c) {
        // Cells 0 and 1 are the two triangles of the corner quad.
        const double E = c < 2 ? e_corner : 1e-12;
        s.euler_initial[c] = s.mesh.cell(c).centroid.x * EulerState{1.0, 0.0, 0.0, E};
      }
      break;
    }
  }
  return s;
}

double sedov_shock_radius(const Mesh& mesh, std::span<const EulerState> u, double bin_width, double ambient) {
  double rmax = 0.0;
  for (const Cell& c : mesh.cells()) rmax = std::max(rmax, norm(c.centroid));
  const int bins = static_cast<int>(std::ceil(rmax / bin_width)) + 1;
  std::vector<double> mass(bins, 0.0), volume(bins, 0.0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Cell& T = mesh.cell(c);
    const int b = std::min(bins - 1, static_cast<int>(norm(T.centroid) / bin_width));
    const double w = T.area * T.centroid.x;
    mass[b] += w * u[c].rho;
    volume[b] += w;
  }
  std::vector<double> rho(bins, ambient);
  for (int b = 0; b < bins; ++b)
    if (volume[b] > 0.0) rho[b] = mass[b] / volume[b];
  const int peak = static_cast<int>(std::max_element(rho.begin(), rho.end()) - rho.begin());
  const double half = 0.5 * (rho[peak] + ambient);
  for (int b = peak; b + 1 < bins; ++b) {
    if (rho[b + 1] <= half) {
      const double s = (rho[b] - half) / (rho[b] - rho[b + 1]);
      return (b + 0.5 + s) * bin_width;
    }
  }
  return (bins - 0.5) * bin_width;
}

double integral(const Mesh& mesh, std::span<const double> u) {
  double sum = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) sum += mesh.cell(c).area * u[c];
  return sum;
}

EulerState integral(const Mesh& mesh, std::span<const EulerState> u) {
  EulerState sum{};
  for (int c = 0; c < mesh.num_cells(); ++c) sum += mesh.cell(c).area * u[c];
  return sum;
}

ScalarRunResult run_scalar(const CaseSetup& setup, const ScalarRunOptions& options) {
  if (is_euler(setup.id)) throw InputError("run_scalar needs a scalar case");
  setup.policy.validate();
  const auto start = std::chrono::steady_clock::now();
  ScalarSystem system(setup.mesh, setup.scalar, options.method);
  ScalarRunResult r;
  r.u = setup.scalar_initial;
  const double end = options.end_time.value_or(setup.end_time);
  const double dt = compute_dt(system, setup.policy);
  while (r.time < end * (1.0 - 1e-14)) {
    const double step = std::min(dt, end - r.time);
    advance_scalar(system, r.u, r.time, step, setup.integrator, options.stage_hook);
    r.time = r.time + step >= end * (1.0 - 1e-14) ? end : r.time + step;
    ++r.steps;
    if (options.on_step) options.on_step(r.steps, r.time, r.u);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.recon_seconds = system.reconstruction_seconds();
  r.stats = system.stats();
  return r;
}

EulerRunResult run_euler(const CaseSetup& setup, const EulerRunOptions& options) {
  if (!is_euler(setup.id)) throw InputError("run_euler needs an Euler case");
  setup.policy.validate();
  setup.amr.validate();
  const auto start = std::chrono::steady_clock::now();
  EulerRunResult r;
  r.u = setup.euler_initial;
  const double end = options.end_time.value_or(setup.end_time);

  std::optional<RefinementForest> forest;
  if (setup.amr.enabled) forest.emplace(setup.mesh, setup.amr.max_level);
  const Mesh* mesh = forest ? &forest->mesh() : &setup.mesh;
  r.max_cells = mesh->num_cells();

  const auto make_system = [&] {
    return std::make_unique<EulerSystem>(*mesh, setup.gas, setup.flux, options.method, setup.boundary,
                                         setup.axisymmetric);
  };
  auto system = make_system();
  auto stepper = std::make_unique<EulerStepper>(*system, setup.policy, setup.integrator);
  const auto retire = [&] {
    r.stats.merge(stepper->stats());
    r.halvings += stepper->total_halvings();
    r.scaled_cells += stepper->scaled_cells();
    r.membership_failures += stepper->membership_failures();
  };

  while (r.time < end * (1.0 - 1e-14) && (options.max_steps < 0 || r.steps < options.max_steps)) {
    const EulerStepReport report = stepper->step(r.u, r.time, end - r.time);
    r.time = r.time + report.dt >= end * (1.0 - 1e-14) ? end : r.time + report.dt;
    ++r.steps;
    if (options.on_step) options.on_step(*mesh, r.steps, r.time, r.u);
    if (forest && r.steps % setup.amr.interval == 0) {
      const auto flags = flag_cells(*mesh, r.u, setup.gas, setup.amr.threshold);
      if (forest->adapt(flags, r.u, setup.gas).changed()) {
        retire();
        system = make_system();
        stepper = std::make_unique<EulerStepper>(*system, setup.policy, setup.integrator);
        ++r.adaptations;
        r.max_cells = std::max(r.max_cells, mesh->num_cells());
        if (options.on_step) options.on_step(*mesh, r.steps, r.time, r.u);
      }
    }
  }
  retire();
  stepper.reset();
  system.reset();
  r.mesh = *mesh;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<ConvergenceLevel> convergence_study(CaseId id, std::span<const int> resolutions,
                                                ReconstructionMethod method, double jitter, std::uint64_t seed) {
  if (is_euler(id)) throw InputError("convergence studies need a scalar case");
  if (jitter > 0.0 && id != CaseId::DoubleSine) throw InputError("jittered convergence meshes need double-sine");
  std::vector<ConvergenceLevel> levels;
  for (int n : resolutions) {
    CaseSetup setup = setup_case(id, n, seed);
    if (jitter > 0.0) {
      setup.mesh = jittered_mesh(n, n, {}, SideKinds::periodic(), jitter, seed);
      for (int c = 0; c < setup.mesh.num_cells(); ++c)
        setup.scalar_initial[c] = cell_average(setup.mesh, c, double_sine);
    }
    ScalarRunOptions options;
    options.method = method;
    const ScalarRunResult run = run_scalar(setup, options);
    ConvergenceLevel level;
    level.resolution = n;
    level.cells = setup.mesh.num_cells();
    level.error = error_norms(setup.mesh, run.u, [&](const Vec2& x) { return exact_solution(id, x, run.time); });
    level.error.recon_seconds = run.recon_seconds;
    if (!levels.empty()) {
      const ConvergenceLevel& prev = levels.back();
      level.error.l1_order = observed_order(prev.error.l1, level.error.l1, prev.cells, level.cells);
      level.error.linf_order = observed_order(prev.error.linf, level.error.linf, prev.cells, level.cells);
    }
    levels.push_back(level);
  }
  return levels;
}

}  // namespace ilr
