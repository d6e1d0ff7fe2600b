#include "ilr/time_integration.hpp"

#include <algorithm>
#include <cmath>

#include "ilr/errors.hpp"

namespace ilr {

std::string_view to_string(CflRule rule) {
  return rule == CflRule::Theorem ? "theorem" : "conventional";
}

std::optional<CflRule> parse_cfl_rule(std::string_view name) {
  if (name == "theorem") return CflRule::Theorem;
  if (name == "conventional") return CflRule::Conventional;
  return std::nullopt;
}

std::string_view to_string(Integrator integrator) {
  return integrator == Integrator::ForwardEuler ? "euler" : "ssp-rk2";
}

std::optional<Integrator> parse_integrator(std::string_view name) {
  if (name == "euler") return Integrator::ForwardEuler;
  if (name == "ssp-rk2") return Integrator::SspRk2;
  return std::nullopt;
}

void TimeStepPolicy::validate() const {
  if (!(cfl > 0.0)) throw InputError("cfl must be positive");
  if (!(beta > 0.0 && beta <= 1.0)) throw InputError("beta must lie in (0, 1]");
  if (fixed_dt && !(*fixed_dt > 0.0)) throw InputError("fixed dt must be positive");
  if (!(backoff > 0.0 && backoff < 1.0)) throw InputError("backoff factor must lie in (0, 1)");
  if (max_backoff < 0) throw InputError("max_backoff must be non-negative");
}

double compute_dt(const ScalarSystem& system, const TimeStepPolicy& policy) {
  if (policy.fixed_dt) return *policy.fixed_dt;
  const double h = min_inscribed_diameter(system.mesh());
  if (!(h > 0.0)) throw InputError("non-positive mesh size");
  const double v = system.max_normal_speed();
  if (!(v > 0.0)) throw InputError("zero velocity field needs a fixed time step");
  const double dt = policy.cfl * h / v;
  return policy.rule == CflRule::Theorem ? dt / 12.0 : dt;
}

double euler_speed_bound(const EulerSystem& system, const TimeStepPolicy& policy) {
  const double h = min_inscribed_diameter(system.mesh());
  if (!(h > 0.0)) throw InputError("non-positive mesh size");
  if (system.axisymmetric())
    return policy.beta * std::min(h / 4.0, 3.0 * system.min_radius() / system.gas().gamma);
  return 0.5 * policy.beta * h;
}

double compute_dt(const EulerSystem& system, double a, const TimeStepPolicy& policy) {
  if (policy.fixed_dt) return *policy.fixed_dt;
  if (!(a > 0.0)) throw InputError("zero wave speed needs a fixed time step");
  return euler_speed_bound(system, policy) / a;
}

void advance_scalar(ScalarSystem& system, std::vector<double>& u, double t, double dt, Integrator integrator,
                    const StageHook<double>& hook) {
  const auto L = [&system](const std::vector<double>& v, double time, std::vector<double>& out) {
    system.residual(v, time, out);
  };
  if (integrator == Integrator::SspRk2) {
    ssp_rk2_step(u, t, dt, L, hook);
    return;
  }
  std::vector<double> rate, next;
  forward_euler_step(u, t, dt, L, rate, next);
  if (hook) hook(u, next);
  u.swap(next);
}

EulerStepper::EulerStepper(const EulerSystem& system, TimeStepPolicy policy, Integrator integrator)
    : system_(&system), policy_(policy), integrator_(integrator) {
  policy_.validate();
  speed_bound_ = euler_speed_bound(system, policy_);
}

bool EulerStepper::try_stage(const std::vector<EulerState>& u, EulerStage& stage, double dt,
                             std::vector<EulerState>& out, int& bad_cell) {
  if (auto c = system_->check_membership(u, stage, dt, policy_.beta)) {
    if (policy_.enforce_membership) {
      bad_cell = *c;
      return false;
    }
    ++pending_failures_;
  }
  rate_.resize(u.size());
  out.resize(u.size());
  system_->residual(stage, rate_);
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + dt * rate_[i];
  if (auto c = system_->first_inadmissible(out)) {
    bad_cell = *c;
    return false;
  }
  return true;
}

EulerStepReport EulerStepper::step(std::vector<EulerState>& u, double t, double dt_limit) {
  EulerStepReport report;
  const double scaling = policy_.scale_gradients ? policy_.beta : 0.0;
  system_->prepare(u, t, stage0_, scaling);
  stats_.merge(stage0_.recon.stats);
  scaled_cells_ += stage0_.scaled_cells;
  report.wave_speed = stage0_.wave_speed;
  double dt = std::min(compute_dt(*system_, stage0_.wave_speed, policy_), dt_limit);
  int bad_cell = -1;

  bool shrunk = false;
  for (int attempt = 0; attempt <= policy_.max_backoff; ++attempt) {
    pending_failures_ = 0;
    if (attempt > 0 && !shrunk) {
      dt *= policy_.backoff;
      ++report.halvings;
      ++total_halvings_;
    }
    shrunk = false;
    if (!try_stage(u, stage0_, dt, u1_, bad_cell)) continue;
    if (integrator_ == Integrator::ForwardEuler) {
      membership_failures_ += pending_failures_;
      u.swap(u1_);
      report.dt = dt;
      return report;
    }
    try {
      system_->prepare(u1_, t + dt, stage1_, scaling);
    } catch (const PositivityLoss& e) {
      bad_cell = e.cell();
      continue;
    }
    stats_.merge(stage1_.recon.stats);
    scaled_cells_ += stage1_.scaled_cells;
    if (!policy_.fixed_dt && stage1_.wave_speed * dt > speed_bound_) {
      // The second stage is faster; retry at its own limit.
      dt = 0.95 * speed_bound_ / stage1_.wave_speed;
      shrunk = true;
      continue;
    }
    if (!try_stage(u1_, stage1_, dt, u2_, bad_cell)) continue;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.5 * u[i] + 0.5 * u2_[i];
    if (auto c = system_->first_inadmissible(u)) throw PositivityLoss(*c, t + dt, "convex combination left the admissible set");
    membership_failures_ += pending_failures_;
    report.dt = dt;
    return report;
  }
  throw PositivityLoss(bad_cell, t, "time-step backoff exhausted");
}

}  // namespace ilr
