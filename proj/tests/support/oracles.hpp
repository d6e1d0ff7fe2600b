#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "ilr/geometry.hpp"
#include "ilr/mesh.hpp"
#include "ilr/physics.hpp"
#include "ilr/qp.hpp"

namespace ilr::testing {

inline bool qp_feasible(const QPProblem& qp, const Vec2& L, double slack) {
  for (std::size_t j = 0; j < qp.rows; ++j) {
    const double v = dot(qp.a[j], L);
    if (v < qp.lower[j] - slack || v > qp.upper[j] + slack) return false;
  }
  return true;
}

/// Exact minimum by enumerating every candidate active set (none, one line,
/// two lines) and keeping the best feasible KKT point.
inline double qp_enumeration_minimum(const QPProblem& qp, Vec2* argmin = nullptr) {
  const double slack = 1e-11 * qp.reference_magnitude();
  std::vector<std::pair<Vec2, double>> lines;  // a^T L = b
  for (std::size_t j = 0; j < qp.rows; ++j) {
    lines.push_back({qp.a[j], qp.lower[j]});
    lines.push_back({qp.a[j], qp.upper[j]});
  }
  double best = std::numeric_limits<double>::infinity();
  Vec2 best_L;
  const auto consider = [&](const Vec2& L) {
    if (!qp_feasible(qp, L, slack)) return;
    const double f = qp.objective(L);
    if (f < best) {
      best = f;
      best_L = L;
    }
  };
  const Mat2 Ginv = qp.G.inverse();
  consider(-1.0 * (Ginv * qp.c));
  for (const auto& [a, b] : lines) {
    // min 1/2 L^T G L + c^T L s.t. a^T L = b.
    const Vec2 Gia = Ginv * a;
    const Vec2 Gic = Ginv * qp.c;
    const double mu = (b + dot(a, Gic)) / dot(a, Gia);
    consider(mu * Gia - Gic);
  }
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t k = i + 1; k < lines.size(); ++k) {
      const Mat2 A{lines[i].first.x, lines[i].first.y, lines[k].first.x, lines[k].first.y};
      if (std::abs(A.det()) < 1e-14 * A.norm2()) continue;
      consider(A.inverse() * Vec2{lines[i].second, lines[k].second});
    }
  if (argmin) *argmin = best_L;
  return best;
}

/// Grid search over the bounding box of the feasible polygon followed by a
/// local polish: exact minima along the constraint lines near the grid
/// optimum (clipped to the feasible interval) and their intersections,
/// repeated from each improved point.
inline double qp_grid_minimum(const QPProblem& qp, int n = 400) {
  // Feasible polygon vertices give the bounding box.
  double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
  const double slack = 1e-11 * qp.reference_magnitude();
  for (std::size_t i = 0; i < qp.rows; ++i)
    for (std::size_t k = i + 1; k < qp.rows; ++k)
      for (double bi : {qp.lower[i], qp.upper[i]})
        for (double bk : {qp.lower[k], qp.upper[k]}) {
          const Mat2 A{qp.a[i].x, qp.a[i].y, qp.a[k].x, qp.a[k].y};
          if (std::abs(A.det()) < 1e-14 * A.norm2()) continue;
          const Vec2 v = A.inverse() * Vec2{bi, bk};
          if (!qp_feasible(qp, v, slack)) continue;
          xlo = std::min(xlo, v.x);
          xhi = std::max(xhi, v.x);
          ylo = std::min(ylo, v.y);
          yhi = std::max(yhi, v.y);
        }
  double best = std::numeric_limits<double>::infinity();
  Vec2 best_L;
  for (int i = 0; i <= n; ++i)
    for (int k = 0; k <= n; ++k) {
      const Vec2 L{xlo + (xhi - xlo) * i / n, ylo + (yhi - ylo) * k / n};
      if (!qp_feasible(qp, L, slack)) continue;
      const double f = qp.objective(L);
      if (f < best) {
        best = f;
        best_L = L;
      }
    }
  if (!std::isfinite(best)) return qp.objective({});  // region collapsed onto the origin
  const double spacing = std::max(xhi - xlo, yhi - ylo) / n;
  const Mat2 Ginv = qp.G.inverse();
  const Vec2 Gic = Ginv * qp.c;
  const auto consider = [&](const Vec2& L) {
    if (!qp_feasible(qp, L, slack)) return;
    const double f = qp.objective(L);
    if (f < best) {
      best = f;
      best_L = L;
    }
  };
  consider(-1.0 * Gic);
  // Exact minimum along the line a.L = b, clipped to the feasible interval.
  const auto along_line = [&](const Vec2& a, double b) {
    const Vec2 p0 = (b / dot(a, a)) * a, dir{-a.y, a.x};
    double tlo = -std::numeric_limits<double>::infinity(), thi = -tlo;
    for (std::size_t j = 0; j < qp.rows; ++j) {
      const double s = dot(qp.a[j], dir), v = dot(qp.a[j], p0);
      if (std::abs(s) < 1e-14 * norm(qp.a[j]) * norm(dir)) continue;
      const double t1 = (qp.lower[j] - v) / s, t2 = (qp.upper[j] - v) / s;
      tlo = std::max(tlo, std::min(t1, t2));
      thi = std::min(thi, std::max(t1, t2));
    }
    if (tlo > thi) return;
    const double curvature = dot(dir, qp.G * dir);
    const double t = -(dot(dir, qp.G * p0) + dot(qp.c, dir)) / curvature;
    consider(p0 + std::clamp(t, tlo, thi) * dir);
  };
  for (int round = 0; round < 4; ++round) {
    const double before = best;
    std::vector<std::pair<Vec2, double>> near;
    for (std::size_t j = 0; j < qp.rows; ++j) {
      const double v = dot(qp.a[j], best_L);
      const double band = 3.0 * spacing * norm(qp.a[j]);
      if (v - qp.lower[j] <= band) near.push_back({qp.a[j], qp.lower[j]});
      if (qp.upper[j] - v <= band) near.push_back({qp.a[j], qp.upper[j]});
    }
    for (const auto& [a, b] : near) along_line(a, b);
    for (std::size_t i = 0; i < near.size(); ++i)
      for (std::size_t k = i + 1; k < near.size(); ++k) {
        const Mat2 A{near[i].first.x, near[i].first.y, near[k].first.x, near[k].first.y};
        if (std::abs(A.det()) < 1e-14 * A.norm2()) continue;
        consider(A.inverse() * Vec2{near[i].second, near[k].second});
      }
    if (best >= before) break;
  }
  return best;
}

/// Random QP: either generic (random SPD G) or shaped like a reconstruction stencil.
inline QPProblem random_qp(std::mt19937_64& rng, bool stencil_like) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  QPProblem qp;
  if (stencil_like) {
    const int J = std::uniform_int_distribution<int>(3, 4)(rng);
    const double u0 = U(rng);
    for (int j = 0; j < J; ++j) {
      const double ang = 2.0 * M_PI * (j + 0.35 * U(rng)) / J;
      const Vec2 r{std::cos(ang) * (1.0 + 0.3 * U(rng)), std::sin(ang) * (1.0 + 0.3 * U(rng))};
      const double uj = U(rng);
      qp.G = qp.G + outer(r);
      qp.c += (u0 - uj) * r;
      qp.add_row(0.5 * r + Vec2{0.1 * U(rng), 0.1 * U(rng)}, std::min(u0, uj) - u0, std::max(u0, uj) - u0);
    }
  } else {
    const double th = M_PI * U(rng);
    const double l1 = std::exp(2.0 * U(rng)), l2 = std::exp(2.0 * U(rng));
    const double cs = std::cos(th), sn = std::sin(th);
    qp.G = {l1 * cs * cs + l2 * sn * sn, (l1 - l2) * cs * sn, (l1 - l2) * cs * sn, l1 * sn * sn + l2 * cs * cs};
    qp.c = {3.0 * U(rng), 3.0 * U(rng)};
    const int J = std::uniform_int_distribution<int>(3, 6)(rng);
    for (int j = 0; j < J; ++j) {
      const double ang = 2.0 * M_PI * (j + 0.4 * U(rng)) / J;
      qp.add_row({std::cos(ang), std::sin(ang)}, -std::abs(U(rng)), std::abs(U(rng)));
    }
  }
  return qp;
}

inline double minmod(double a, double b, double c) {
  if (a > 0 && b > 0 && c > 0) return std::min({a, b, c});
  if (a < 0 && b < 0 && c < 0) return std::max({a, b, c});
  return 0.0;
}

/// Largest phi on a uniform grid of spacing `resolution` in [0, 1] keeping phi d feasible.
inline double barth_line_search(const QPProblem& qp, const Vec2& d, double resolution = 1e-6) {
  const int n = static_cast<int>(std::lround(1.0 / resolution));
  int lo = 0, hi = n;  // feasibility in phi is monotone (convex set containing 0)
  const auto ok = [&](int k) {
    const double phi = static_cast<double>(k) / n;
    for (std::size_t j = 0; j < qp.rows; ++j) {
      const double v = phi * dot(qp.a[j], d);
      if (v > qp.upper[j] || v < qp.lower[j]) return false;
    }
    return true;
  };
  if (ok(n)) return 1.0;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (ok(mid) ? lo : hi) = mid;
  }
  return static_cast<double>(lo) / n;
}

/// Exact Riemann solver for the 1D Euler equations (ideal gas); returns the
/// state sampled at x/t = s.
struct ExactRiemann {
  double gamma = 1.4;

  struct State1D {
    double rho, u, p;
  };

  double f(double p, const State1D& w, double& df) const {
    const double c = std::sqrt(gamma * w.p / w.rho);
    if (p > w.p) {
      const double A = 2.0 / ((gamma + 1.0) * w.rho);
      const double B = (gamma - 1.0) / (gamma + 1.0) * w.p;
      const double q = std::sqrt(A / (p + B));
      df = q * (1.0 - 0.5 * (p - w.p) / (p + B));
      return (p - w.p) * q;
    }
    const double e = (gamma - 1.0) / (2.0 * gamma);
    df = 1.0 / (w.rho * c) * std::pow(p / w.p, -(gamma + 1.0) / (2.0 * gamma));
    return 2.0 * c / (gamma - 1.0) * (std::pow(p / w.p, e) - 1.0);
  }

  State1D sample(const State1D& L, const State1D& R, double s) const {
    double p = 0.5 * (L.p + R.p);
    for (int it = 0; it < 100; ++it) {
      double dl, dr;
      const double g = f(p, L, dl) + f(p, R, dr) + (R.u - L.u);
      const double next = std::max(1e-12, p - g / (dl + dr));
      if (std::abs(next - p) < 1e-14 * p) {
        p = next;
        break;
      }
      p = next;
    }
    double dl, dr;
    const double u = 0.5 * (L.u + R.u) + 0.5 * (f(p, R, dr) - f(p, L, dl));
    const double g1 = (gamma - 1.0) / (gamma + 1.0);
    if (s <= u) {
      const double c = std::sqrt(gamma * L.p / L.rho);
      if (p > L.p) {
        const double S = L.u - c * std::sqrt((gamma + 1.0) / (2.0 * gamma) * p / L.p + (gamma - 1.0) / (2.0 * gamma));
        if (s <= S) return L;
        return {L.rho * (p / L.p + g1) / (g1 * p / L.p + 1.0), u, p};
      }
      const double cs = c * std::pow(p / L.p, (gamma - 1.0) / (2.0 * gamma));
      if (s <= L.u - c) return L;
      if (s >= u - cs) return {L.rho * std::pow(p / L.p, 1.0 / gamma), u, p};
      const double uf = 2.0 / (gamma + 1.0) * (c + (gamma - 1.0) / 2.0 * L.u + s);
      const double cf = 2.0 / (gamma + 1.0) * (c + (gamma - 1.0) / 2.0 * (L.u - s));
      const double rf = L.rho * std::pow(cf / c, 2.0 / (gamma - 1.0));
      return {rf, uf, L.p * std::pow(cf / c, 2.0 * gamma / (gamma - 1.0))};
    }
    const double c = std::sqrt(gamma * R.p / R.rho);
    if (p > R.p) {
      const double S = R.u + c * std::sqrt((gamma + 1.0) / (2.0 * gamma) * p / R.p + (gamma - 1.0) / (2.0 * gamma));
      if (s >= S) return R;
      return {R.rho * (p / R.p + g1) / (g1 * p / R.p + 1.0), u, p};
    }
    const double cs = c * std::pow(p / R.p, (gamma - 1.0) / (2.0 * gamma));
    if (s >= R.u + c) return R;
    if (s <= u + cs) return {R.rho * std::pow(p / R.p, 1.0 / gamma), u, p};
    const double uf = 2.0 / (gamma + 1.0) * (-c + (gamma - 1.0) / 2.0 * R.u + s);
    const double cf = 2.0 / (gamma + 1.0) * (c - (gamma - 1.0) / 2.0 * (R.u - s));
    const double rf = R.rho * std::pow(cf / c, 2.0 / (gamma - 1.0));
    return {rf, uf, R.p * std::pow(cf / c, 2.0 * gamma / (gamma - 1.0))};
  }

  /// Godunov flux along +x.
  EulerState godunov_flux(const State1D& L, const State1D& R) const {
    const State1D w = sample(L, R, 0.0);
    IdealGas gas{gamma};
    return gas.flux(Primitive{w.rho, w.u, 0.0, w.p}, {1.0, 0.0});
  }
};

/// Largest amount by which `after` leaves [min, max] of `before` over each
/// cell and its edge neighbors (and `exterior` across boundary edges, unless
/// NaN). Zero when the local maximum principle holds.
inline double max_principle_excess(const Mesh& mesh, const std::vector<double>& before,
                                   const std::vector<double>& after,
                                   double exterior = std::numeric_limits<double>::quiet_NaN()) {
  double worst = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    double lo = before[c], hi = before[c];
    for (const Face& f : mesh.faces(c)) {
      const double v = f.neighbor >= 0 ? before[f.neighbor] : exterior;
      if (std::isnan(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    worst = std::max({worst, lo - after[c], after[c] - hi});
  }
  return worst;
}

}  // namespace ilr::testing
