#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ilr/amr.hpp"
#include "ilr/mesh.hpp"
#include "ilr/mesh_generators.hpp"
#include "ilr/systems.hpp"
#include "ilr/time_integration.hpp"

namespace ilr {

enum class CaseId { DoubleSine, SolidBodyRotation, DoubleMach, ForwardStep, Sedov };

std::string_view to_string(CaseId id);
std::optional<CaseId> parse_case(std::string_view name);
bool is_euler(CaseId id);

// Scalar initial data and velocity fields.
double double_sine(const Vec2& x);
Vec2 double_sine_velocity(const Vec2& x);
/// Slotted cylinder, sharp cone and smooth hump; zero elsewhere.
double rotation_profile(const Vec2& x);
Vec2 rotation_velocity(const Vec2& x);

/// Exact solution of the scalar cases. Throws InputError for Euler cases.
double exact_solution(CaseId id, const Vec2& x, double t);

/// Self-similar point blast in 3D for a gas with ratio of specific heats gamma.
/// Profiles are tabulated once by integrating the similarity equations from the
/// shock inward.
class SedovSolution {
 public:
  explicit SedovSolution(double gamma = 1.4);

  /// E = alpha rho R^5 / t^2.
  double alpha() const { return alpha_; }
  double shock_radius(double energy, double rho, double t) const;
  /// Primitive state at spherical radius r (rho, radial velocity, 0, p).
  Primitive state(double r, double energy, double rho, double t) const;

 private:
  double gamma_;
  double alpha_ = 0.0;
  // Similarity variables on a grid in xi = r / R, ascending.
  std::vector<double> xi_, f_, g_, h_;
};

/// Cell average of f by the edge-midpoint rule (exact for linear f).
double cell_average(const Mesh& mesh, int cell, const std::function<double(const Vec2&)>& f);

struct ErrorReport {
  double l1 = 0.0;
  double linf = 0.0;
  std::optional<double> l1_order;
  std::optional<double> linf_order;
  double recon_seconds = 0.0;
};

/// L1 = sum |T| |u - avg(exact)|, Linf = max |u - avg(exact)|.
ErrorReport error_norms(const Mesh& mesh, std::span<const double> u, const std::function<double(const Vec2&)>& exact);

/// Observed order between a coarse and a fine run from the cell counts.
double observed_order(double coarse_error, double fine_error, int coarse_cells, int fine_cells);

/// sum_T ( |grad u_0| |T| + 1/2 sum_j |u_j^- - u_j^+| |e_j| ).
double discrete_tv(const Mesh& mesh, std::span<const Vec2> gradient, std::span<const double> inner,
                   std::span<const double> outer);
/// Reconstructs u with the system's method and exterior values.
double discrete_tv(ScalarSystem& system, std::span<const double> u, double t);

/// nx x ny quads with rows in geometric progression of ratio `stretch`
/// symmetric about y = 0.5, interior nodes moved in x by up to shift * dx,
/// each quad split along a diagonal.
Mesh stretched_mesh(int nx, int ny, double stretch, std::uint64_t seed, double shift = 0.3,
                    const SideKinds& sides = SideKinds::all(BoundaryKind::Dirichlet));

/// L-shaped wind tunnel [0,3]x[0,1] minus the step [0.6,3]x[0,0.2], with
/// `n` cells per unit length, refined `corner_levels` times near the step corner.
Mesh forward_step_mesh(int n, int corner_levels = 1, double corner_radius = 0.15);

// Euler states used by the cases.
Primitive double_mach_post_shock();
Primitive double_mach_pre_shock();
Primitive forward_step_inflow();

struct CaseSetup {
  CaseId id = CaseId::DoubleSine;
  Mesh mesh;
  double end_time = 0.0;
  TimeStepPolicy policy;
  Integrator integrator = Integrator::SspRk2;
  // Scalar cases.
  ScalarProblem scalar;
  std::vector<double> scalar_initial;
  // Euler cases.
  IdealGas gas;
  FluxKind flux = FluxKind::HLLC;
  EulerBoundary boundary;
  bool axisymmetric = false;
  std::vector<EulerState> euler_initial;
  AmrSettings amr;
};

/// Resolution meaning per case: DoubleSine n (n x n x 2 periodic),
/// SolidBodyRotation nx (nx x 2nx x 2 stretched), DoubleMach ny (4ny x ny x 2),
/// ForwardStep cells per unit length, Sedov cells per side of [0,1.2]^2.
CaseSetup setup_case(CaseId id, int resolution, std::uint64_t seed = 1);
/// Default resolution of each case.
int default_resolution(CaseId id);

/// Sedov blast energy and the corner energy density for spacing l.
inline constexpr double kSedovEnergy = 0.851072;
double sedov_corner_energy(double l);

/// Radius where the angle-averaged density falls to the midpoint between its
/// peak and the ambient value, outward of the peak. `u` holds physical states.
double sedov_shock_radius(const Mesh& mesh, std::span<const EulerState> u, double bin_width, double ambient = 1.0);

/// sum_T |T| u_T.
double integral(const Mesh& mesh, std::span<const double> u);
EulerState integral(const Mesh& mesh, std::span<const EulerState> u);

struct ScalarRunOptions {
  ReconstructionMethod method = ReconstructionMethod::ILR;
  /// Overrides the case end time.
  std::optional<double> end_time;
  StageHook<double> stage_hook;
  std::function<void(int step, double t, const std::vector<double>& u)> on_step;
};

struct ScalarRunResult {
  std::vector<double> u;
  double time = 0.0;
  int steps = 0;
  double seconds = 0.0;
  double recon_seconds = 0.0;
  QPStats stats;
};

/// Runs a scalar case to its end time; the last step is shortened to land on it.
ScalarRunResult run_scalar(const CaseSetup& setup, const ScalarRunOptions& options = {});

struct EulerRunOptions {
  ReconstructionMethod method = ReconstructionMethod::ILR;
  std::optional<double> end_time;
  /// Stop after this many steps (negative: no limit).
  int max_steps = -1;
  /// Called after every accepted step and after every adaptation, with
  /// conservative states on the current mesh.
  std::function<void(const Mesh& mesh, int step, double t, const std::vector<EulerState>& u)> on_step;
};

struct EulerRunResult {
  Mesh mesh;
  std::vector<EulerState> u;
  double time = 0.0;
  int steps = 0;
  long long halvings = 0;
  long long scaled_cells = 0;
  long long membership_failures = 0;
  int adaptations = 0;
  int max_cells = 0;
  double seconds = 0.0;
  QPStats stats;
};

/// Runs an Euler case, adapting the mesh with the pressure-jump indicator
/// when setup.amr is enabled. Throws PositivityLoss if a step cannot be taken.
EulerRunResult run_euler(const CaseSetup& setup, const EulerRunOptions& options = {});

struct ConvergenceLevel {
  int resolution = 0;
  int cells = 0;
  ErrorReport error;
};

/// Scalar case at each resolution, with observed orders filled in from the
/// previous level. jitter > 0 moves interior nodes by that fraction of the
/// spacing (DoubleSine only).
std::vector<ConvergenceLevel> convergence_study(CaseId id, std::span<const int> resolutions,
                                                ReconstructionMethod method, double jitter = 0.0,
                                                std::uint64_t seed = 1);

}  // namespace ilr
