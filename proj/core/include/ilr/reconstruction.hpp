#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ilr/mesh.hpp"
#include "ilr/physics.hpp"
#include "ilr/qp.hpp"

namespace ilr {

enum class ReconstructionMethod { ILR, Barth, Unlimited };

std::string_view to_string(ReconstructionMethod method);
std::optional<ReconstructionMethod> parse_reconstruction(std::string_view name);

/// Iteration counts of the per-cell QP solves.
struct QPStats {
  static constexpr int kBins = 8;
  /// histogram[k]: solves that took k iterations (last bin collects k >= 7).
  std::array<long long, kBins> histogram{};
  long long solves = 0;
  long long unconverged = 0;

  void record(int iterations, bool converged);
  void merge(const QPStats& other);
  double mean() const;
  int median() const;
};

/// Piecewise-linear field u_0 + L^T (x - x_0) per cell, with its values at
/// every face midpoint.
struct ReconstructedField {
  std::vector<Vec2> gradient;
  /// u_j^-, indexed by face id.
  std::vector<double> trace;
  QPStats stats;
};

/// Least-squares QP over the von Neumann stencil. Throws InputError if the
/// cell has a physical boundary face and DegenerateStencil if G is singular.
QPProblem assemble_interior_qp(const Mesh& mesh, std::span<const double> u, int cell);

/// Least-squares QP over the Moore stencil. Interior faces get the pair
/// bounds of the interior variant; boundary faces get the range of the cell
/// and its edge neighbors. Throws DegenerateStencil if the stencil is empty or collinear.
QPProblem assemble_boundary_qp(const Mesh& mesh, std::span<const double> u, int cell);

/// The boundary variant for cells touching the boundary, the interior one otherwise.
QPProblem assemble_qp(const Mesh& mesh, std::span<const double> u, int cell);

/// -G^{-1} c.
Vec2 unlimited_gradient(const QPProblem& qp);

/// Largest phi in [0, 1] such that phi * d stays inside the bounds, evaluated in
/// closed form row by row.
double barth_factor(const QPProblem& qp, const Vec2& d);

/// Gradient for one cell's QP. `stats` receives the solve when method is ILR.
Vec2 limited_gradient(const QPProblem& qp, ReconstructionMethod method, QPStats* stats = nullptr);

void reconstruct(const Mesh& mesh, std::span<const double> u, ReconstructionMethod method,
                 ReconstructedField& out);
ReconstructedField reconstruct(const Mesh& mesh, std::span<const double> u, ReconstructionMethod method);

/// Componentwise reconstruction of primitive variables (rho, u, v, p).
struct EulerReconstruction {
  std::array<ReconstructedField, 4> components;
  /// Face states; a face whose reconstructed density or pressure is not
  /// positive falls back to the cell average.
  std::vector<Primitive> trace;
  int clamped = 0;
  QPStats stats;
};

/// Throws PositivityLoss naming the first inadmissible cell.
void reconstruct_primitive(const Mesh& mesh, std::span<const Primitive> w, ReconstructionMethod method,
                           EulerReconstruction& out, double time = 0.0);
void reconstruct_euler(const Mesh& mesh, std::span<const EulerState> u, const IdealGas& gas,
                       ReconstructionMethod method, EulerReconstruction& out, double time = 0.0);
EulerReconstruction reconstruct_euler(const Mesh& mesh, std::span<const EulerState> u,
                                      const IdealGas& gas, ReconstructionMethod method);

}  // namespace ilr
