#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ilr/bench.hpp"
#include "ilr/mesh.hpp"
#include "ilr/physics.hpp"

namespace ilr {

struct CellData {
  std::string name;
  std::vector<double> values;
};

struct CellVectors {
  std::string name;
  std::vector<Vec2> values;
};

/// Legacy ASCII VTK unstructured grid. Triangles are VTK_TRIANGLE (5), twin
/// triangles VTK_QUAD (9) through all four vertices. Names must not contain spaces.
void write_vtk(const Mesh& mesh, std::span<const CellData> scalars, std::span<const CellVectors> vectors,
               std::ostream& out);
/// Throws Error if the file cannot be written.
void write_vtk(const Mesh& mesh, std::span<const CellData> scalars, std::span<const CellVectors> vectors,
               const std::string& path);

/// density, velocity_x, velocity_y, pressure of physical states
/// (conservative states are divided by r when axisymmetric).
std::vector<CellData> euler_cell_data(const Mesh& mesh, std::span<const EulerState> u, const IdealGas& gas,
                                      bool axisymmetric);

/// cells,l1,l1_order,linf,linf_order,recon_seconds (orders empty on the first row).
void write_convergence_csv(std::span<const ConvergenceLevel> levels, std::ostream& out);

}  // namespace ilr
