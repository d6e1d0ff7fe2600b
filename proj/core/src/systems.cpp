#include "ilr/systems.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "ilr/errors.hpp"
#include "ilr/parallel.hpp"

namespace ilr {

ScalarSystem::ScalarSystem(const Mesh& mesh, ScalarProblem problem, ReconstructionMethod method)
    : mesh_(&mesh), problem_(std::move(problem)), method_(method) {
  if (!problem_.velocity) throw InputError("scalar problem needs a velocity field");
  edge_speed_.resize(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    edge_speed_[e] = dot(problem_.velocity(edge.midpoint), edge.normal);
    max_speed_ = std::max(max_speed_, std::abs(edge_speed_[e]));
  }
  outer_.resize(mesh.num_faces());
  face_flux_.resize(mesh.num_faces());
}

double ScalarSystem::exterior(const Face& face, double inner, double t) const {
  const BoundaryKind kind = mesh_->edge(face.edge).kind;
  if (kind == BoundaryKind::Dirichlet || kind == BoundaryKind::Inflow)
    return problem_.boundary_value ? problem_.boundary_value(face.midpoint, t) : 0.0;
  return inner;
}

void ScalarSystem::prepare(std::span<const double> u, double t) {
  const auto start = std::chrono::steady_clock::now();
  reconstruct(*mesh_, u, method_, recon_);
  recon_seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  stats_.merge(recon_.stats);
  const auto faces = mesh_->faces();
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const Face& face = faces[f];
    outer_[f] = face.twin_face >= 0 ? recon_.trace[face.twin_face] : exterior(face, recon_.trace[f], t);
  }
}

void ScalarSystem::residual(std::span<const double> u, double t, std::span<double> out) {
  prepare(u, t);
  const Mesh& mesh = *mesh_;
  parallel_for(mesh.num_edges(), [&](int e) {
    const Edge& edge = mesh.edge(e);
    const int f0 = edge.faces[0];
    const double vn = edge_speed_[e];
    const double flux = (vn >= 0.0 ? vn * recon_.trace[f0] : vn * outer_[f0]) * edge.length;
    face_flux_[f0] = flux;
    if (edge.faces[1] >= 0) face_flux_[edge.faces[1]] = -flux;
  });
  parallel_for(mesh.num_cells(), [&](int c) {
    const Cell& T = mesh.cell(c);
    double sum = 0.0;
    for (int j = 0; j < T.face_count(); ++j) sum += face_flux_[T.first_face + j];
    out[c] = -sum / T.area;
  });
}

Primitive euler_exterior(BoundaryKind kind, const Primitive& inner, const Vec2& normal,
                         const Vec2& position, double t, const EulerBoundary& boundary) {
  switch (kind) {
    case BoundaryKind::Wall:
    case BoundaryKind::Symmetry: {
      const double vn = inner.u * normal.x + inner.v * normal.y;
      return {inner.rho, inner.u - 2.0 * vn * normal.x, inner.v - 2.0 * vn * normal.y, inner.p};
    }
    case BoundaryKind::Inflow:
    case BoundaryKind::Dirichlet:
      if (!boundary.prescribed) throw InputError("boundary state required for inflow/dirichlet edges");
      return boundary.prescribed(position, t);
    default:
      return inner;
  }
}

EulerSystem::EulerSystem(const Mesh& mesh, IdealGas gas, FluxKind flux, ReconstructionMethod method,
                         EulerBoundary boundary, bool axisymmetric)
    : mesh_(&mesh),
      gas_(gas),
      flux_(flux),
      method_(method),
      boundary_(std::move(boundary)),
      axisymmetric_(axisymmetric) {
  if (flux == FluxKind::Upwind) throw InputError("the upwind flux applies to scalar advection only");
  h_min_ = min_inscribed_diameter(mesh);
  if (axisymmetric) {
    r_min_ = std::numeric_limits<double>::infinity();
    for (const Vec2& v : mesh.vertices())
      if (v.x < -1e-12 * mesh.diameter()) throw InputError("axisymmetric mesh has negative radius");
    for (const Face& f : mesh.faces())
      if (f.midpoint.x > 0.0) r_min_ = std::min(r_min_, f.midpoint.x);
  }
}

EulerState EulerSystem::physical(const EulerState& U, int cell) const {
  return axisymmetric_ ? (1.0 / mesh_->cell(cell).centroid.x) * U : U;
}

std::optional<int> EulerSystem::first_inadmissible(std::span<const EulerState> u) const {
  for (int c = 0; c < mesh_->num_cells(); ++c)
    if (!gas_.admissible(physical(u[c], c))) return c;
  return std::nullopt;
}

void EulerSystem::prepare(std::span<const EulerState> u, double t, EulerStage& stage, double scaling_beta) const {
  const Mesh& mesh = *mesh_;
  const int n = mesh.num_cells();
  stage.time = t;
  stage.cell_primitive.resize(n);
  for (int c = 0; c < n; ++c) {
    const EulerState s = physical(u[c], c);
    if (!gas_.admissible(s)) throw PositivityLoss(c, t, "inadmissible cell average");
    stage.cell_primitive[c] = gas_.to_primitive(s);
  }
  reconstruct_primitive(mesh, stage.cell_primitive, method_, stage.recon, t);

  const int nf = mesh.num_faces();
  stage.inner.resize(nf);
  stage.outer.resize(nf);
  for (int f = 0; f < nf; ++f) stage.inner[f] = gas_.to_conserved(stage.recon.trace[f]);
  stage.scaled_cells = 0;
  if (scaling_beta > 0.0) {
    for (int c = 0; c < n; ++c) {
      const Cell& T = mesh.cell(c);
      const double ratio = h_min_ / T.inscribed_diameter;
      const double theta = axisymmetric_ ? 0.5 * scaling_beta * (ratio + 1.0) : scaling_beta * ratio;
      if (member(u[c], c, stage, theta)) continue;
      ++stage.scaled_cells;
      const Primitive& w0 = stage.cell_primitive[c];
      std::array<Primitive, 4> full;
      for (int j = 0; j < T.face_count(); ++j) full[j] = stage.recon.trace[T.first_face + j];
      for (double s = 0.5;; s *= 0.5) {
        if (s < 1.0 / 1024.0) s = 0.0;
        for (int j = 0; j < T.face_count(); ++j) {
          const int f = T.first_face + j;
          Primitive w;
          for (int k = 0; k < 4; ++k) w[k] = w0[k] + s * (full[j][k] - w0[k]);
          stage.recon.trace[f] = w;
          stage.inner[f] = gas_.to_conserved(w);
        }
        if (s == 0.0 || member(u[c], c, stage, theta)) {
          for (auto& comp : stage.recon.components) comp.gradient[c] *= s;
          break;
        }
      }
    }
  }
  double speed = 0.0;
  for (int f = 0; f < nf; ++f) {
    const Face& face = mesh.face(f);
    if (face.twin_face >= 0) {
      stage.outer[f] = stage.inner[face.twin_face];
    } else {
      const Primitive w = euler_exterior(mesh.edge(face.edge).kind, stage.recon.trace[f], face.normal,
                                         face.midpoint, t, boundary_);
      if (!gas_.admissible(w)) throw PositivityLoss(face.cell, t, "inadmissible boundary state");
      stage.outer[f] = gas_.to_conserved(w);
      speed = std::max(speed, gas_.wave_speed(w));
    }
    speed = std::max(speed, gas_.wave_speed(stage.recon.trace[f]));
  }
  stage.wave_speed = speed;
}

void EulerSystem::residual(const EulerStage& stage, std::span<EulerState> out) const {
  const Mesh& mesh = *mesh_;
  thread_local std::vector<EulerState> buffer;
  std::vector<EulerState>& face_flux = buffer;  // shared with the workers below
  face_flux.resize(mesh.num_faces());
  const double a = stage.wave_speed;
  parallel_for(mesh.num_edges(), [&](int e) {
    const Edge& edge = mesh.edge(e);
    const int f0 = edge.faces[0];
    const Face& face = mesh.face(f0);
    const EulerState& um = stage.inner[f0];
    const EulerState& up = stage.outer[f0];
    EulerState F = flux_ == FluxKind::HLLC ? hllc_flux(gas_, um, up, face.normal)
                                           : llf_flux(gas_, um, up, face.normal, a);
    F *= edge.length * (axisymmetric_ ? face.midpoint.x : 1.0);
    face_flux[f0] = F;
    if (edge.faces[1] >= 0) face_flux[edge.faces[1]] = -1.0 * F;
  });
  parallel_for(mesh.num_cells(), [&](int c) {
    const Cell& T = mesh.cell(c);
    EulerState sum;
    for (int j = 0; j < T.face_count(); ++j) sum += face_flux[T.first_face + j];
    EulerState r = (-1.0 / T.area) * sum;
    if (axisymmetric_) {
      for (int j = 0; j < T.face_count(); ++j) {
        const int f = T.first_face + j;
        r.mx += mesh.face(f).weight * stage.recon.trace[f].p;
      }
    }
    out[c] = r;
  });
}

bool EulerSystem::member(const EulerState& U0, int cell, const EulerStage& stage, double theta) const {
  const Cell& T = mesh_->cell(cell);
  EulerState sum;
  for (int j = 0; j < T.face_count(); ++j) {
    const int f = T.first_face + j;
    const Face& face = mesh_->face(f);
    const double w = 3.0 * face.weight * (axisymmetric_ ? face.midpoint.x : 1.0);
    sum += w * stage.inner[f];
  }
  const EulerState v = U0 - theta * sum;
  const double tol = 1e-12;
  const double q = v.rho * v.E - 0.5 * (v.mx * v.mx + v.my * v.my);
  return v.rho >= -tol * U0.rho && q >= -tol * U0.rho * U0.E;
}

std::optional<int> EulerSystem::check_membership(std::span<const EulerState> u, const EulerStage& stage,
                                                 double dt, double beta) const {
  const Mesh& mesh = *mesh_;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    double theta = 2.0 * stage.wave_speed * dt / mesh.cell(c).inscribed_diameter;
    if (axisymmetric_) theta += 0.5 * beta;
    if (!member(u[c], c, stage, theta)) return c;
  }
  return std::nullopt;
}

}  // namespace ilr
