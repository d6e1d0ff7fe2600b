#include "ilr/output.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "ilr/errors.hpp"

namespace ilr {

void write_vtk(const Mesh& mesh, std::span<const CellData> scalars, std::span<const CellVectors> vectors,
               std::ostream& out) {
  const int n = mesh.num_cells();
  for (const CellData& d : scalars)
    if (static_cast<int>(d.values.size()) != n) throw InputError("cell data '" + d.name + "' has the wrong size");
  for (const CellVectors& d : vectors)
    if (static_cast<int>(d.values.size()) != n) throw InputError("cell vectors '" + d.name + "' have the wrong size");

  out << std::setprecision(17);
  out << "# vtk DataFile Version 3.0\nilrfv\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Vec2& v : mesh.vertices()) out << v.x << ' ' << v.y << " 0\n";
  long long size = 0;
  for (const Cell& c : mesh.cells()) size += 1 + c.vertex_count;
  out << "CELLS " << n << ' ' << size << '\n';
  for (const Cell& c : mesh.cells()) {
    out << c.vertex_count;
    for (int k = 0; k < c.vertex_count; ++k) out << ' ' << c.vertices[k];
    out << '\n';
  }
  out << "CELL_TYPES " << n << '\n';
  for (const Cell& c : mesh.cells()) out << (c.vertex_count == 4 ? 9 : 5) << '\n';
  if (scalars.empty() && vectors.empty()) return;
  out << "CELL_DATA " << n << '\n';
  for (const CellData& d : scalars) {
    out << "SCALARS " << d.name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : d.values) out << v << '\n';
  }
  for (const CellVectors& d : vectors) {
    out << "VECTORS " << d.name << " double\n";
    for (const Vec2& v : d.values) out << v.x << ' ' << v.y << " 0\n";
  }
}

void write_vtk(const Mesh& mesh, std::span<const CellData> scalars, std::span<const CellVectors> vectors,
               const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_vtk(mesh, scalars, vectors, out);
  if (!out) throw Error("write failed for " + path);
}

std::vector<CellData> euler_cell_data(const Mesh& mesh, std::span<const EulerState> u, const IdealGas& gas,
                                      bool axisymmetric) {
  std::vector<CellData> data{{"density", {}}, {"velocity_x", {}}, {"velocity_y", {}}, {"pressure", {}}};
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double r = axisymmetric ? mesh.cell(c).centroid.x : 1.0;
    const Primitive w = gas.to_primitive((1.0 / r) * u[c]);
    for (int k = 0; k < 4; ++k) data[k].values.push_back(w[k]);
  }
  return data;
}

void write_convergence_csv(std::span<const ConvergenceLevel> levels, std::ostream& out) {
  out << "cells,l1,l1_order,linf,linf_order,recon_seconds\n";
  out << std::setprecision(6);
  for (const ConvergenceLevel& l : levels) {
    out << l.cells << ',' << l.error.l1 << ',';
    if (l.error.l1_order) out << *l.error.l1_order;
    out << ',' << l.error.linf << ',';
    if (l.error.linf_order) out << *l.error.linf_order;
    out << ',' << l.error.recon_seconds << '\n';
  }
}

}  // namespace ilr
