#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ilr/systems.hpp"

namespace ilr {

/// How the scalar time step follows from the CFL number:
///   Conventional: dt = cfl * h / max|v.n|
///   Theorem:      dt = cfl * h / (12 max|v.n|), the local maximum principle bound for cfl <= 1.
enum class CflRule { Conventional, Theorem };
enum class Integrator { ForwardEuler, SspRk2 };

std::string_view to_string(CflRule rule);
std::optional<CflRule> parse_cfl_rule(std::string_view name);
std::string_view to_string(Integrator integrator);
std::optional<Integrator> parse_integrator(std::string_view name);

struct TimeStepPolicy {
  double cfl = 0.3;
  CflRule rule = CflRule::Conventional;
  /// Euler: a dt <= beta h / 2 (beta min(h/4, 3 r_min / gamma) with the axisymmetric source).
  double beta = 1.0 / 3.0;
  std::optional<double> fixed_dt;
  double backoff = 0.5;
  int max_backoff = 10;
  /// When false the membership condition is only counted, and the step is
  /// gated on the admissibility of every stage result alone.
  bool enforce_membership = true;
  /// Scale the gradients of cells that fail the membership condition at the
  /// CFL limit (see EulerSystem::prepare).
  bool scale_gradients = true;

  /// Throws InputError on out-of-range values.
  void validate() const;
};

/// Scalar step from the velocity field and h = min inscribed diameter.
double compute_dt(const ScalarSystem& system, const TimeStepPolicy& policy);
/// Euler step for wave speed `a`. Throws InputError for a = 0 without fixed_dt.
double compute_dt(const EulerSystem& system, double a, const TimeStepPolicy& policy);
/// The bound on a dt used by compute_dt (without fixed_dt).
double euler_speed_bound(const EulerSystem& system, const TimeStepPolicy& policy);

/// out = u + dt L(u).
template <class State, class Residual>
void forward_euler_step(const std::vector<State>& u, double t, double dt, Residual&& L,
                        std::vector<State>& rate, std::vector<State>& out) {
  rate.resize(u.size());
  out.resize(u.size());
  L(u, t, rate);
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + dt * rate[i];
}

/// Called after each forward-Euler stage with (stage input, stage output).
template <class State>
using StageHook = std::function<void(const std::vector<State>&, const std::vector<State>&)>;

/// u* = u + dt L(u); u <- 1/2 u + 1/2 (u* + dt L(u*)).
template <class State, class Residual>
void ssp_rk2_step(std::vector<State>& u, double t, double dt, Residual&& L,
                  const StageHook<State>& hook = {}) {
  std::vector<State> rate, stage1, stage2;
  forward_euler_step(u, t, dt, L, rate, stage1);
  if (hook) hook(u, stage1);
  forward_euler_step(stage1, t + dt, dt, L, rate, stage2);
  if (hook) hook(stage1, stage2);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.5 * u[i] + 0.5 * stage2[i];
}

/// One step of the scalar scheme.
void advance_scalar(ScalarSystem& system, std::vector<double>& u, double t, double dt, Integrator integrator,
                    const StageHook<double>& hook = {});

struct EulerStepReport {
  double dt = 0.0;
  int halvings = 0;
  double wave_speed = 0.0;
};

/// Step controller for the Euler systems. Every stage checks the membership
/// condition before stepping and the admissibility of the result after; any
/// failure halves the step and restarts it. After max_backoff halvings the
/// step throws PositivityLoss.
class EulerStepper {
 public:
  EulerStepper(const EulerSystem& system, TimeStepPolicy policy, Integrator integrator);

  /// Advances u from t by at most dt_limit.
  EulerStepReport step(std::vector<EulerState>& u, double t, double dt_limit);

  /// Reconstruction of the state at the start of the last step.
  const EulerStage& initial_stage() const { return stage0_; }
  const QPStats& stats() const { return stats_; }
  long long total_halvings() const { return total_halvings_; }
  /// Accepted stages on which the membership condition failed (monitor mode).
  long long membership_failures() const { return membership_failures_; }
  /// Cell reconstructions scaled toward first order, over all stages.
  long long scaled_cells() const { return scaled_cells_; }

 private:
  bool try_stage(const std::vector<EulerState>& u, EulerStage& stage, double dt, std::vector<EulerState>& out,
                 int& bad_cell);

  const EulerSystem* system_;
  TimeStepPolicy policy_;
  Integrator integrator_;
  double speed_bound_;
  EulerStage stage0_, stage1_;
  std::vector<EulerState> rate_, u1_, u2_;
  QPStats stats_;
  long long total_halvings_ = 0;
  long long membership_failures_ = 0;
  long long scaled_cells_ = 0;
  int pending_failures_ = 0;
};

}  // namespace ilr
