#include "ilr/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "ilr/errors.hpp"
#include "ilr/parallel.hpp"

namespace ilr {

std::string_view to_string(ReconstructionMethod method) {
  switch (method) {
    case ReconstructionMethod::ILR: return "ilr";
    case ReconstructionMethod::Barth: return "barth";
    case ReconstructionMethod::Unlimited: return "unlimited";
  }
  return "unknown";
}

std::optional<ReconstructionMethod> parse_reconstruction(std::string_view name) {
  for (auto m : {ReconstructionMethod::ILR, ReconstructionMethod::Barth, ReconstructionMethod::Unlimited})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

void QPStats::record(int iterations, bool converged) {
  ++histogram[std::clamp(iterations, 0, kBins - 1)];
  ++solves;
  if (!converged) ++unconverged;
}

void QPStats::merge(const QPStats& other) {
  for (int k = 0; k < kBins; ++k) histogram[k] += other.histogram[k];
  solves += other.solves;
  unconverged += other.unconverged;
}

double QPStats::mean() const {
  if (solves == 0) return 0.0;
  double sum = 0.0;
  for (int k = 0; k < kBins; ++k) sum += static_cast<double>(k) * static_cast<double>(histogram[k]);
  return sum / static_cast<double>(solves);
}

int QPStats::median() const {
  if (solves == 0) return 0;
  long long seen = 0;
  for (int k = 0; k < kBins; ++k) {
    seen += histogram[k];
    if (2 * seen >= solves) return k;
  }
  return kBins - 1;
}

namespace {

struct Neighbor {
  int cell;
  Vec2 r;
};

/// Collects the stencil offsets of `cell` and returns G.
Mat2 gather_stencil(const Mesh& mesh, int cell, bool boundary, std::vector<Neighbor>& out) {
  out.clear();
  const Vec2 x0 = mesh.cell(cell).centroid;
  if (boundary) {
    for (const StencilEntry& s : mesh.moore_stencil(cell))
      out.push_back({s.cell, mesh.cell(s.cell).centroid + s.shift - x0});
  } else {
    for (const Face& f : mesh.faces(cell)) {
      if (f.neighbor < 0) throw InputError("interior stencil requested for a boundary cell");
      out.push_back({f.neighbor, mesh.cell(f.neighbor).centroid + f.neighbor_shift - x0});
    }
  }
  Mat2 G;
  for (const Neighbor& n : out) G = G + outer(n.r);
  if (out.empty() || !(G.norm2() > 0.0) || !(G.det() >= 1e-14 * G.norm2())) throw DegenerateStencil(cell);
  return G;
}

template <class Value>
QPProblem build_qp(const Mesh& mesh, int cell, bool boundary, const Mat2& G,
                   const std::vector<Neighbor>& stencil, Value&& value) {
  QPProblem qp;
  qp.G = G;
  const Vec2 x0 = mesh.cell(cell).centroid;
  const double u0 = value(cell);
  for (const Neighbor& n : stencil) qp.c += (u0 - value(n.cell)) * n.r;

  const auto faces = mesh.faces(cell);
  qp.rows = faces.size();
  if (boundary) {
    // Interior faces keep the pair bounds; boundary faces use the range of the
    // cell and its edge neighbors.
    double lo = u0, hi = u0;
    for (const Face& f : faces)
      if (f.neighbor >= 0) {
        lo = std::min(lo, value(f.neighbor));
        hi = std::max(hi, value(f.neighbor));
      }
    for (std::size_t j = 0; j < faces.size(); ++j) {
      qp.a[j] = faces[j].midpoint - x0;
      const double uj = faces[j].neighbor >= 0 ? value(faces[j].neighbor) : u0;
      qp.lower[j] = (faces[j].neighbor >= 0 ? std::min(u0, uj) : lo) - u0;
      qp.upper[j] = (faces[j].neighbor >= 0 ? std::max(u0, uj) : hi) - u0;
    }
  } else {
    for (std::size_t j = 0; j < faces.size(); ++j) {
      const double uj = value(stencil[j].cell);
      qp.a[j] = faces[j].midpoint - x0;
      qp.lower[j] = std::min(u0, uj) - u0;
      qp.upper[j] = std::max(u0, uj) - u0;
    }
  }
  return qp;
}

std::vector<Neighbor>& scratch() {
  thread_local std::vector<Neighbor> buffer;
  return buffer;
}

QPProblem assemble(const Mesh& mesh, std::span<const double> u, int cell, bool boundary) {
  auto& stencil = scratch();
  const Mat2 G = gather_stencil(mesh, cell, boundary, stencil);
  return build_qp(mesh, cell, boundary, G, stencil, [&](int c) { return u[c]; });
}

/// Iteration record of one solve; iterations < 0 means no QP was solved.
struct SolveRecord {
  std::int8_t iterations = -1;
  bool converged = true;
};

Vec2 gradient_for(const QPProblem& qp, ReconstructionMethod method, SolveRecord& record) {
  switch (method) {
    case ReconstructionMethod::Unlimited: return unlimited_gradient(qp);
    case ReconstructionMethod::Barth: {
      const Vec2 d = unlimited_gradient(qp);
      return barth_factor(qp, d) * d;
    }
    case ReconstructionMethod::ILR: {
      const QPResult r = solve_qp(qp);
      record.iterations = static_cast<std::int8_t>(r.iterations);
      record.converged = r.converged;
      return r.L;
    }
  }
  return {};
}

}  // namespace

QPProblem assemble_interior_qp(const Mesh& mesh, std::span<const double> u, int cell) {
  return assemble(mesh, u, cell, false);
}

QPProblem assemble_boundary_qp(const Mesh& mesh, std::span<const double> u, int cell) {
  return assemble(mesh, u, cell, true);
}

QPProblem assemble_qp(const Mesh& mesh, std::span<const double> u, int cell) {
  return assemble(mesh, u, cell, mesh.cell(cell).touches_boundary);
}

Vec2 unlimited_gradient(const QPProblem& qp) { return -1.0 * (qp.G.inverse() * qp.c); }

double barth_factor(const QPProblem& qp, const Vec2& d) {
  double phi = 1.0;
  for (std::size_t j = 0; j < qp.rows; ++j) {
    const double dj = dot(qp.a[j], d);
    if (dj > qp.upper[j]) {
      phi = std::min(phi, qp.upper[j] / dj);
    } else if (dj < qp.lower[j]) {
      phi = std::min(phi, qp.lower[j] / dj);
    }
  }
  return std::max(phi, 0.0);
}

Vec2 limited_gradient(const QPProblem& qp, ReconstructionMethod method, QPStats* stats) {
  SolveRecord record;
  const Vec2 L = gradient_for(qp, method, record);
  if (stats && record.iterations >= 0) stats->record(record.iterations, record.converged);
  return L;
}

void reconstruct(const Mesh& mesh, std::span<const double> u, ReconstructionMethod method,
                 ReconstructedField& out) {
  if (static_cast<int>(u.size()) != mesh.num_cells()) throw InputError("field size does not match mesh");
  const int n = mesh.num_cells();
  out.gradient.resize(n);
  out.trace.resize(mesh.num_faces());
  out.stats = {};
  std::vector<SolveRecord> records(n);

  parallel_for(n, [&](int c) {
    const QPProblem qp = assemble_qp(mesh, u, c);
    const Vec2 L = gradient_for(qp, method, records[c]);
    out.gradient[c] = L;
    const Cell& T = mesh.cell(c);
    for (int j = 0; j < T.face_count(); ++j)
      out.trace[T.first_face + j] = u[c] + dot(L, qp.a[j]);
  });

  for (const SolveRecord& r : records)
    if (r.iterations >= 0) out.stats.record(r.iterations, r.converged);
}

ReconstructedField reconstruct(const Mesh& mesh, std::span<const double> u, ReconstructionMethod method) {
  ReconstructedField out;
  reconstruct(mesh, u, method, out);
  return out;
}

void reconstruct_primitive(const Mesh& mesh, std::span<const Primitive> w, ReconstructionMethod method,
                           EulerReconstruction& out, double time) {
  if (static_cast<int>(w.size()) != mesh.num_cells()) throw InputError("field size does not match mesh");
  const int n = mesh.num_cells();
  for (int c = 0; c < n; ++c) {
    const Primitive& s = w[c];
    if (!(s.rho > 0.0) || !(s.p > 0.0) || !std::isfinite(s.u) || !std::isfinite(s.v) ||
        !std::isfinite(s.rho) || !std::isfinite(s.p))
      throw PositivityLoss(c, time, "inadmissible cell average");
  }
  for (auto& comp : out.components) {
    comp.gradient.resize(n);
    comp.trace.resize(mesh.num_faces());
    comp.stats = {};
  }
  out.trace.resize(mesh.num_faces());
  out.stats = {};
  std::vector<std::array<SolveRecord, 4>> records(n);
  std::vector<std::uint8_t> clamped(n, 0);

  parallel_for(n, [&](int c) {
    const Cell& T = mesh.cell(c);
    const bool boundary = T.touches_boundary;
    auto& stencil = scratch();
    const Mat2 G = gather_stencil(mesh, c, boundary, stencil);
    std::array<Vec2, 4> a{};
    for (int k = 0; k < 4; ++k) {
      const QPProblem qp = build_qp(mesh, c, boundary, G, stencil, [&](int i) { return w[i][k]; });
      const Vec2 L = gradient_for(qp, method, records[c][k]);
      out.components[k].gradient[c] = L;
      for (int j = 0; j < T.face_count(); ++j) {
        a[j] = qp.a[j];
        out.components[k].trace[T.first_face + j] = w[c][k] + dot(L, qp.a[j]);
      }
    }
    for (int j = 0; j < T.face_count(); ++j) {
      const int f = T.first_face + j;
      Primitive s{out.components[0].trace[f], out.components[1].trace[f], out.components[2].trace[f],
                  out.components[3].trace[f]};
      if (!(s.rho > 0.0) || !(s.p > 0.0)) {
        s = w[c];
        ++clamped[c];
      }
      out.trace[f] = s;
    }
  });

  out.clamped = 0;
  for (int c = 0; c < n; ++c) {
    out.clamped += clamped[c];
    for (int k = 0; k < 4; ++k) {
      const SolveRecord& r = records[c][k];
      if (r.iterations < 0) continue;
      out.components[k].stats.record(r.iterations, r.converged);
      out.stats.record(r.iterations, r.converged);
    }
  }
}

void reconstruct_euler(const Mesh& mesh, std::span<const EulerState> u, const IdealGas& gas,
                       ReconstructionMethod method, EulerReconstruction& out, double time) {
  std::vector<Primitive> w(u.size());
  for (std::size_t c = 0; c < u.size(); ++c) {
    if (!(u[c].rho > 0.0)) throw PositivityLoss(static_cast<int>(c), time, "non-positive density");
    w[c] = gas.to_primitive(u[c]);
  }
  reconstruct_primitive(mesh, w, method, out, time);
}

EulerReconstruction reconstruct_euler(const Mesh& mesh, std::span<const EulerState> u,
                                      const IdealGas& gas, ReconstructionMethod method) {
  EulerReconstruction out;
  reconstruct_euler(mesh, u, gas, method, out);
  return out;
}

}  // namespace ilr
