#include "ilr/physics.hpp"

#include <algorithm>
#include <cmath>

#include "ilr/errors.hpp"

namespace ilr {

double IdealGas::sound_speed(const Primitive& w) const { return std::sqrt(gamma * w.p / w.rho); }

bool IdealGas::admissible(const EulerState& s) const {
  return s.rho > 0.0 && std::isfinite(s.E) && pressure(s) > 0.0;
}

double IdealGas::wave_speed(const Primitive& w) const {
  return std::hypot(w.u, w.v) + sound_speed(w);
}

EulerState IdealGas::flux(const EulerState& s, const Vec2& n) const {
  return flux(to_primitive(s), n);
}

EulerState IdealGas::flux(const Primitive& w, const Vec2& n) const {
  const double un = w.u * n.x + w.v * n.y;
  const double mass = w.rho * un;
  const double E = w.p / (gamma - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v);
  return {mass, mass * w.u + w.p * n.x, mass * w.v + w.p * n.y, (E + w.p) * un};
}

std::string_view to_string(FluxKind kind) {
  switch (kind) {
    case FluxKind::Upwind: return "upwind";
    case FluxKind::LocalLaxFriedrichs: return "llf";
    case FluxKind::HLLC: return "hllc";
  }
  return "unknown";
}

std::optional<FluxKind> parse_flux_kind(std::string_view name) {
  for (auto k : {FluxKind::Upwind, FluxKind::LocalLaxFriedrichs, FluxKind::HLLC})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

EulerState llf_flux(const IdealGas& gas, const EulerState& u_minus, const EulerState& u_plus,
                    const Vec2& n, double a) {
  if (!gas.admissible(u_minus) || !gas.admissible(u_plus))
    throw InputError("llf_flux: inadmissible state");
  return 0.5 * (gas.flux(u_minus, n) + gas.flux(u_plus, n)) - 0.5 * a * (u_plus - u_minus);
}

EulerState hllc_flux(const IdealGas& gas, const EulerState& u_minus, const EulerState& u_plus,
                     const Vec2& n) {
  if (!gas.admissible(u_minus) || !gas.admissible(u_plus))
    throw InputError("hllc_flux: inadmissible state");
  const Primitive wl = gas.to_primitive(u_minus);
  const Primitive wr = gas.to_primitive(u_plus);
  const double unl = wl.u * n.x + wl.v * n.y;
  const double unr = wr.u * n.x + wr.v * n.y;
  const double cl = gas.sound_speed(wl);
  const double cr = gas.sound_speed(wr);

  // Roe averages.
  const double sl = std::sqrt(wl.rho);
  const double sr = std::sqrt(wr.rho);
  const double inv = 1.0 / (sl + sr);
  const double u_roe = (sl * wl.u + sr * wr.u) * inv;
  const double v_roe = (sl * wl.v + sr * wr.v) * inv;
  const double hl = (u_minus.E + wl.p) / wl.rho;
  const double hr = (u_plus.E + wr.p) / wr.rho;
  const double h_roe = (sl * hl + sr * hr) * inv;
  const double c2_roe = (gas.gamma - 1.0) * (h_roe - 0.5 * (u_roe * u_roe + v_roe * v_roe));
  const double c_roe = c2_roe > 0.0 ? std::sqrt(c2_roe) : std::max(cl, cr);
  const double un_roe = u_roe * n.x + v_roe * n.y;

  const double SL = std::min(unl - cl, un_roe - c_roe);
  const double SR = std::max(unr + cr, un_roe + c_roe);
  const double ml = wl.rho * (SL - unl);
  const double mr = wr.rho * (SR - unr);
  const double S_star = (wr.p - wl.p + ml * unl - mr * unr) / (ml - mr);
  if (!std::isfinite(SL) || !std::isfinite(SR) || !std::isfinite(S_star))
    throw InputError("hllc_flux: non-finite wave speed");

  if (SL >= 0.0) return gas.flux(wl, n);
  if (SR <= 0.0) return gas.flux(wr, n);

  const auto star = [&](const EulerState& U, const Primitive& w, double S, double un) {
    const double factor = w.rho * (S - un) / (S - S_star);
    const double dun = S_star - un;
    return EulerState{factor, factor * (w.u + dun * n.x), factor * (w.v + dun * n.y),
                      factor * (U.E / w.rho + dun * (S_star + w.p / (w.rho * (S - un))))};
  };
  if (S_star >= 0.0) return gas.flux(wl, n) + SL * (star(u_minus, wl, SL, unl) - u_minus);
  return gas.flux(wr, n) + SR * (star(u_plus, wr, SR, unr) - u_plus);
}

AxisymmetricTerms axisymmetric_terms(const IdealGas& gas, const EulerState& U, const Vec2& position) {
  const double r = position.x;
  if (r < 0.0) throw InputError("axisymmetric_terms: negative radius");
  AxisymmetricTerms t;
  if (r == 0.0) return t;
  const Primitive w = gas.to_primitive(U);
  t.f = gas.flux(w, {1.0, 0.0});
  t.g = gas.flux(w, {0.0, 1.0});
  t.s = {0.0, w.p / r, 0.0, 0.0};
  return t;
}

}  // namespace ilr
