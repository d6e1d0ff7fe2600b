#include "ilr/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ilr/errors.hpp"

namespace ilr {

void QPProblem::add_row(const Vec2& row, double lo, double hi) {
  if (rows >= kMaxRows) throw InputError("QP supports at most 8 constraint rows");
  a[rows] = row;
  lower[rows] = lo;
  upper[rows] = hi;
  ++rows;
}

double QPProblem::reference_magnitude() const {
  double U = 0.0;
  for (std::size_t j = 0; j < rows; ++j) U = std::max(U, upper[j] - lower[j]);
  return std::max(U, 1e-300);
}

void check_spd(const Mat2& G) {
  if (!(G.a > 0.0) || !(G.d > 0.0) || std::abs(G.b - G.c) > 1e-12 * std::sqrt(G.norm2()))
    throw InputError("QP matrix is not symmetric positive definite");
  if (!(G.det() >= 1e-14 * G.norm2())) throw InputError("QP matrix is singular");
}

SubproblemSolution equality_subproblem(const Mat2& G, const Vec2& c, const Vec2& L,
                                       std::span<const Vec2> active_rows) {
  SubproblemSolution out;
  const Mat2 Ginv = G.inverse();
  const Vec2 Ginv_c = Ginv * c;
  const Vec2 rhs_base = L + Ginv_c;
  switch (active_rows.size()) {
    case 0:
      out.p = -1.0 * rhs_base;
      return out;
    case 1: {
      const Vec2& m = active_rows[0];
      const double s = dot(m, Ginv * m);
      if (!(s > 1e-14 * dot(m, m) * std::sqrt(Ginv.norm2()))) {
        out.degenerate = true;
        return out;
      }
      out.lambda[0] = dot(m, rhs_base) / s;
      out.p = Ginv * (out.lambda[0] * m - c) - L;
      return out;
    }
    case 2: {
      const Vec2& m0 = active_rows[0];
      const Vec2& m1 = active_rows[1];
      const Vec2 g0 = Ginv * m0;
      const Vec2 g1 = Ginv * m1;
      const Mat2 S{dot(m0, g0), dot(m0, g1), dot(m1, g0), dot(m1, g1)};
      if (!(S.det() > 1e-14 * S.norm2())) {
        out.degenerate = true;
        return out;
      }
      const Vec2 lam = S.inverse() * Vec2{dot(m0, rhs_base), dot(m1, rhs_base)};
      out.lambda = {lam.x, lam.y};
      out.p = Ginv * (lam.x * m0 + lam.y * m1 - c) - L;
      return out;
    }
    default:
      out.degenerate = true;
      return out;
  }
}

StepLength step_length(const QPProblem& qp, const Vec2& L, const Vec2& p, double epsilon) {
  const double tol = epsilon * qp.reference_magnitude();
  StepLength out;
  for (std::size_t j = 0; j < qp.rows; ++j) {
    const double ap = dot(qp.a[j], p);
    const double aL = dot(qp.a[j], L);
    double beta;
    if (ap > tol) {
      beta = (qp.upper[j] - aL) / ap;
    } else if (ap < -tol) {
      beta = (qp.lower[j] - aL) / ap;
    } else {
      continue;
    }
    beta = std::max(beta, 0.0);
    if (beta < out.alpha) {
      out.alpha = beta;
      out.blocking = static_cast<int>(j);
      out.side = ap > 0.0 ? -1 : 1;
    }
  }
  return out;
}

QPResult solve_qp(const QPProblem& qp, const QPOptions& options) {
  check_spd(qp.G);
  const double tol = options.epsilon * qp.reference_magnitude();

  QPResult result;
  std::array<ActiveConstraint, 2>& active = result.active;
  int& count = result.active_count;
  Vec2& L = result.L;

  while (result.iterations < options.max_iterations) {
    ++result.iterations;
    std::array<Vec2, 2> rows;
    for (int k = 0; k < count; ++k) rows[k] = static_cast<double>(active[k].side) * qp.a[active[k].row];
    const auto sub = equality_subproblem(qp.G, qp.c, L, std::span<const Vec2>(rows.data(), count));
    if (sub.degenerate) {
      // Drop the most recently added constraint and try again.
      --count;
      continue;
    }

    double change = 0.0;
    for (std::size_t j = 0; j < qp.rows; ++j) change = std::max(change, std::abs(dot(qp.a[j], sub.p)));
    if (change <= tol) {
      int worst = -1;
      for (int k = 0; k < count; ++k) {
        if (sub.lambda[k] < -tol && (worst < 0 || sub.lambda[k] < sub.lambda[worst])) worst = k;
      }
      if (worst < 0) {
        result.converged = true;
        return result;
      }
      for (int k = worst; k + 1 < count; ++k) active[k] = active[k + 1];
      --count;
      continue;
    }

    const auto step = step_length(qp, L, sub.p, options.epsilon);
    L += step.alpha * sub.p;
    if (step.blocking) {
      if (count == 2) {
        // Cannot happen with two independent active rows (p = 0); keep the newest.
        active[0] = active[1];
        count = 1;
      }
      active[count++] = {*step.blocking, step.side};
    }
  }
  return result;
}

}  // namespace ilr
