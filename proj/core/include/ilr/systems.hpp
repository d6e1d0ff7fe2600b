#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ilr/mesh.hpp"
#include "ilr/physics.hpp"
#include "ilr/reconstruction.hpp"

namespace ilr {

/// Linear advection u_t + div(v u) = 0 with a steady, divergence-free velocity.
struct ScalarProblem {
  std::function<Vec2(const Vec2&)> velocity;
  /// Exterior value on Dirichlet and Inflow edges; zero when unset.
  std::function<double(const Vec2&, double)> boundary_value;
};

/// Semi-discrete operator L(u) = -1/|T| sum_j |e_j| F(u_j^-, u_j^+; n_j) for
/// scalar advection with the upwind flux.
class ScalarSystem {
 public:
  ScalarSystem(const Mesh& mesh, ScalarProblem problem, ReconstructionMethod method);

  const Mesh& mesh() const { return *mesh_; }
  ReconstructionMethod method() const { return method_; }

  /// Reconstructs u and writes L(u) into `out`.
  void residual(std::span<const double> u, double t, std::span<double> out);

  /// Reconstruction and exterior values of the last residual() call.
  const ReconstructedField& reconstruction() const { return recon_; }
  /// u_j^+ for every face of the last residual() call.
  std::span<const double> outer_trace() const { return outer_; }

  /// max over edges of |v(z_e) . n_e|.
  double max_normal_speed() const { return max_speed_; }
  /// Reconstructs u and fills the outer traces without computing fluxes.
  void prepare(std::span<const double> u, double t);
  /// Value imposed outside a physical boundary face.
  double exterior(const Face& face, double inner, double t) const;

  /// Wall time spent in reconstruction and QP statistics since construction.
  double reconstruction_seconds() const { return recon_seconds_; }
  const QPStats& stats() const { return stats_; }

 private:
  const Mesh* mesh_;
  ScalarProblem problem_;
  ReconstructionMethod method_;
  std::vector<double> edge_speed_;
  double max_speed_ = 0.0;
  ReconstructedField recon_;
  std::vector<double> outer_;
  std::vector<double> face_flux_;
  double recon_seconds_ = 0.0;
  QPStats stats_;
};

/// Boundary data for the Euler equations: the state prescribed on Inflow and
/// Dirichlet edges as a function of position and time.
struct EulerBoundary {
  std::function<Primitive(const Vec2&, double)> prescribed;
};

/// Exterior primitive state seen across a boundary face.
Primitive euler_exterior(BoundaryKind kind, const Primitive& inner, const Vec2& normal,
                         const Vec2& position, double t, const EulerBoundary& boundary);

/// Reconstructed face data of one stage.
struct EulerStage {
  double time = 0.0;
  EulerReconstruction recon;
  /// Physical primitive cell values used for the reconstruction.
  std::vector<Primitive> cell_primitive;
  /// Physical conservative traces u_j^- and u_j^+ (not scaled by r).
  std::vector<EulerState> inner;
  std::vector<EulerState> outer;
  /// max(|v| + c) over all traces on both sides of every face.
  double wave_speed = 0.0;
  /// Cells whose gradients were scaled down to satisfy the membership condition.
  int scaled_cells = 0;
};

/// Finite-volume operator for the 2D Euler equations, or for the axisymmetric
/// equations in (r, z) = (x, y) with U = r u and the pressure source.
class EulerSystem {
 public:
  EulerSystem(const Mesh& mesh, IdealGas gas, FluxKind flux, ReconstructionMethod method,
              EulerBoundary boundary, bool axisymmetric = false);

  const Mesh& mesh() const { return *mesh_; }
  const IdealGas& gas() const { return gas_; }
  bool axisymmetric() const { return axisymmetric_; }
  FluxKind flux() const { return flux_; }

  /// Reconstructs primitive variables from the cell averages. Throws
  /// PositivityLoss if a cell average is outside the admissible set.
  /// With scaling_beta > 0, the primitive gradients of any cell failing the
  /// membership condition at the largest step allowed by scaling_beta are
  /// scaled by 1/2, 1/4, ... and finally 0 until the condition holds.
  void prepare(std::span<const EulerState> u, double t, EulerStage& stage, double scaling_beta = 0.0) const;

  /// L(u) from a prepared stage.
  void residual(const EulerStage& stage, std::span<EulerState> out) const;

  /// Physical state of cell c (U / r_c in the axisymmetric case).
  EulerState physical(const EulerState& U, int cell) const;
  /// Whether every cell average is admissible; returns the first bad cell otherwise.
  std::optional<int> first_inadmissible(std::span<const EulerState> u) const;

  /// Sufficient positivity condition for a forward step of length dt:
  /// u_0 - theta_T sum_j w_j u_j^- must lie in the closure of the admissible
  /// set, with theta_T = 2 a dt / h_T (plus beta/2 with the source term).
  /// Returns the first failing cell.
  std::optional<int> check_membership(std::span<const EulerState> u, const EulerStage& stage, double dt,
                                      double beta) const;

  /// Minimum face-midpoint radius over midpoints with r > 0.
  double min_radius() const { return r_min_; }

 private:
  bool member(const EulerState& U0, int cell, const EulerStage& stage, double theta) const;

  const Mesh* mesh_;
  IdealGas gas_;
  FluxKind flux_;
  ReconstructionMethod method_;
  EulerBoundary boundary_;
  bool axisymmetric_;
  double r_min_ = 0.0;
  double h_min_ = 0.0;
};

}  // namespace ilr
