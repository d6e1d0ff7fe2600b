#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "ilr/geometry.hpp"

namespace ilr {

/// Two-unknown convex QP with double-sided linear constraints:
///
///   minimize   1/2 L^T G L + c^T L
///   subject to lower_j <= a_j^T L <= upper_j,   j = 0..rows-1
///
/// L = 0 is feasible whenever lower <= 0 <= upper.
struct QPProblem {
  static constexpr std::size_t kMaxRows = 8;

  Mat2 G;
  Vec2 c;
  std::array<Vec2, kMaxRows> a{};
  std::array<double, kMaxRows> lower{};
  std::array<double, kMaxRows> upper{};
  std::size_t rows = 0;

  void add_row(const Vec2& row, double lo, double hi);
  /// Reference magnitude used by the relaxed comparisons: max_j(upper - lower), floored.
  double reference_magnitude() const;
  double objective(const Vec2& L) const { return 0.5 * dot(L, G * L) + dot(c, L); }
};

struct ActiveConstraint {
  int row = -1;
  /// +1: lower bound active, -1: upper bound active.
  int side = 0;
};

struct QPResult {
  Vec2 L;
  int iterations = 0;
  std::array<ActiveConstraint, 2> active{};
  int active_count = 0;
  bool converged = false;
};

struct QPOptions {
  /// Relaxation of the sign tests on a_j^T p and on the multipliers.
  double epsilon = 1e-12;
  int max_iterations = 6;
};

/// Direction and multipliers of the equality-constrained subproblem
///   min 1/2 p^T G p + (G L + c)^T p   s.t.  M p = 0.
struct SubproblemSolution {
  Vec2 p;
  std::array<double, 2> lambda{};
  /// M G^{-1} M^T is numerically singular; p and lambda are meaningless.
  bool degenerate = false;
};

/// `active_rows` holds the rows of M, i.e. delta_j a_j (at most two).
SubproblemSolution equality_subproblem(const Mat2& G, const Vec2& c, const Vec2& L,
                                       std::span<const Vec2> active_rows);

struct StepLength {
  double alpha = 1.0;
  /// Row that blocks the step, when alpha < 1.
  std::optional<int> blocking;
  /// New indicator for the blocking row: -sgn(a_j^T p).
  int side = 0;
};

/// Largest alpha in [0, 1] keeping L + alpha p feasible; ties go to the smallest row.
StepLength step_length(const QPProblem& qp, const Vec2& L, const Vec2& p, double epsilon = 1e-12);

/// Active-set method started from L = 0 with no active constraints. Throws
/// InputError when G is not symmetric positive definite. On reaching the
/// iteration cap the current (feasible) iterate is returned with converged = false.
QPResult solve_qp(const QPProblem& qp, const QPOptions& options = {});

/// Throws InputError unless G is symmetric positive definite with
/// det(G) >= 1e-14 ||G||^2.
void check_spd(const Mat2& G);

}  // namespace ilr
