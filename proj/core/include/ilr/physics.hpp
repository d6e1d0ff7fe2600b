#pragma once

#include <optional>
#include <string_view>

#include "ilr/geometry.hpp"

namespace ilr {

/// Conservative Euler state [rho, rho u, rho v, E].
struct EulerState {
  double rho = 0.0;
  double mx = 0.0;
  double my = 0.0;
  double E = 0.0;

  EulerState& operator+=(const EulerState& o) {
    rho += o.rho;
    mx += o.mx;
    my += o.my;
    E += o.E;
    return *this;
  }
  EulerState& operator-=(const EulerState& o) {
    rho -= o.rho;
    mx -= o.mx;
    my -= o.my;
    E -= o.E;
    return *this;
  }
  EulerState& operator*=(double s) {
    rho *= s;
    mx *= s;
    my *= s;
    E *= s;
    return *this;
  }
  double operator[](int k) const { return k == 0 ? rho : k == 1 ? mx : k == 2 ? my : E; }
  double& operator[](int k) { return k == 0 ? rho : k == 1 ? mx : k == 2 ? my : E; }
  friend bool operator==(const EulerState&, const EulerState&) = default;
};

inline EulerState operator+(EulerState a, const EulerState& b) { return a += b; }
inline EulerState operator-(EulerState a, const EulerState& b) { return a -= b; }
inline EulerState operator*(EulerState a, double s) { return a *= s; }
inline EulerState operator*(double s, EulerState a) { return a *= s; }

/// Primitive Euler state [rho, u, v, p].
struct Primitive {
  double rho = 0.0;
  double u = 0.0;
  double v = 0.0;
  double p = 0.0;

  double operator[](int k) const { return k == 0 ? rho : k == 1 ? u : k == 2 ? v : p; }
  double& operator[](int k) { return k == 0 ? rho : k == 1 ? u : k == 2 ? v : p; }
  friend bool operator==(const Primitive&, const Primitive&) = default;
};

struct IdealGas {
  double gamma = 1.4;

  double pressure(const EulerState& s) const {
    return (gamma - 1.0) * (s.E - 0.5 * (s.mx * s.mx + s.my * s.my) / s.rho);
  }
  double sound_speed(const Primitive& w) const;
  Primitive to_primitive(const EulerState& s) const {
    return {s.rho, s.mx / s.rho, s.my / s.rho, pressure(s)};
  }
  EulerState to_conserved(const Primitive& w) const {
    return {w.rho, w.rho * w.u, w.rho * w.v, w.p / (gamma - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v)};
  }
  /// rho > 0 and p > 0.
  bool admissible(const EulerState& s) const;
  bool admissible(const Primitive& w) const { return w.rho > 0.0 && w.p > 0.0; }
  /// |v| + c.
  double wave_speed(const Primitive& w) const;
  /// Physical flux F(u) . n.
  EulerState flux(const EulerState& s, const Vec2& n) const;
  EulerState flux(const Primitive& w, const Vec2& n) const;
};

enum class FluxKind { Upwind, LocalLaxFriedrichs, HLLC };

std::string_view to_string(FluxKind kind);
std::optional<FluxKind> parse_flux_kind(std::string_view name);

/// Upwind flux for u_t + div(v u) = 0: (v.n) u- if v.n >= 0, else (v.n) u+.
inline double scalar_upwind_flux(double u_minus, double u_plus, const Vec2& n, const Vec2& velocity) {
  const double vn = dot(velocity, n);
  return vn >= 0.0 ? vn * u_minus : vn * u_plus;
}

/// 1/2 [F(u-) + F(u+)] . n - 1/2 a (u+ - u-). Throws InputError on inadmissible states.
EulerState llf_flux(const IdealGas& gas, const EulerState& u_minus, const EulerState& u_plus,
                    const Vec2& n, double a);

/// Three-wave HLLC flux with Einfeldt/Roe wave-speed bounds. Throws InputError on
/// inadmissible states or non-finite wave speeds.
EulerState hllc_flux(const IdealGas& gas, const EulerState& u_minus, const EulerState& u_plus,
                     const Vec2& n);

/// Axisymmetric Euler in (r, z) with U = r u: radial flux f(U), axial flux g(U)
/// and source s(U) = (0, p(U)/r, 0, 0).
struct AxisymmetricTerms {
  EulerState f;
  EulerState g;
  EulerState s;
};

/// Throws InputError for r < 0. At r = 0 the scaled state carries no pressure
/// information and the source is zero; use axisymmetric_source on the physical
/// state there instead.
AxisymmetricTerms axisymmetric_terms(const IdealGas& gas, const EulerState& U, const Vec2& position);

/// Source evaluated from the physical (unscaled) state: (0, p, 0, 0).
inline EulerState axisymmetric_source(const Primitive& w) { return {0.0, w.p, 0.0, 0.0}; }

}  // namespace ilr
