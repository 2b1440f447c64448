#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "awdg/operators.hpp"

namespace awdg {

struct TimeControls {
  double cfl = 0.1;
  double T = 0.0;
  std::optional<double> dt_override;
};

struct StepPlan {
  double dt = 0.0;
  long steps = 0;
};

/// dt = CFL h (or the override), shrunk so an integer number of steps
/// lands exactly on T.
inline StepPlan compute_dt(double h, const TimeControls& tc) {
  if (!(h > 0.0)) throw std::invalid_argument("compute_dt: h must be positive");
  if (tc.T < 0.0) throw std::invalid_argument("compute_dt: T must be non-negative");
  const double dt0 = tc.dt_override ? *tc.dt_override : tc.cfl * h;
  if (!(dt0 > 0.0)) throw std::invalid_argument("compute_dt: step must be positive");
  if (tc.T == 0.0) return {dt0, 0};
  // The 1e-9 slack keeps an exact T/dt0 from rounding up to an extra step.
  const long steps = std::max(1L, static_cast<long>(std::ceil(tc.T / dt0 - 1e-9)));
  return {tc.T / steps, steps};
}

/// Thrown when a step produces non-finite coefficients.
struct InstabilityError : std::runtime_error {
  long step;
  InstabilityError(long s, const std::string& what) : std::runtime_error(what), step(s) {}
};

/// Right-hand side: (state) -> d(state)/dt, reading state.t for forcing.
using Rhs = std::function<ModalState(const ModalState&)>;

inline void axpy(ModalState& y, double a, const ModalState& x) {
  y.u += a * x.u;
  y.v += a * x.v;
}

/// Classic four-stage RK4. Stage times are t, t+dt/2, t+dt/2, t+dt.
inline ModalState rk4_step(const ModalState& s, double dt, const Rhs& rhs) {
  ModalState stage = s;
  const ModalState k1 = rhs(stage);

  stage = s;
  axpy(stage, 0.5 * dt, k1);
  stage.t = s.t + 0.5 * dt;
  const ModalState k2 = rhs(stage);

  stage = s;
  axpy(stage, 0.5 * dt, k2);
  stage.t = s.t + 0.5 * dt;
  const ModalState k3 = rhs(stage);

  stage = s;
  axpy(stage, dt, k3);
  stage.t = s.t + dt;
  const ModalState k4 = rhs(stage);

  ModalState out = s;
  out.u += (dt / 6.0) * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
  out.v += (dt / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  out.t = s.t + dt;
  return out;
}

/// Called after every step with (step index, state); step 0 is the
/// initial state.
using Observer = std::function<void(long, const ModalState&)>;

/// Integrates from state0.t to T. The final time is set to T exactly.
inline ModalState evolve(const ModalState& state0, const StepPlan& plan, const Rhs& rhs,
                         const Observer& observer = {}) {
  ModalState s = state0;
  const double t0 = state0.t;
  if (observer) observer(0, s);
  for (long k = 1; k <= plan.steps; ++k) {
    s = rk4_step(s, plan.dt, rhs);
    s.t = t0 + k * plan.dt;
    if (!s.all_finite())
      throw InstabilityError(k, "non-finite state at step " + std::to_string(k));
    if (observer) observer(k, s);
  }
  return s;
}

template <int Dim>
Rhs make_rhs(const DgOperator<Dim>& op, Forcing<Dim> forcing = {}) {
  return [&op, forcing = std::move(forcing)](const ModalState& s) { return op.apply(s, forcing); };
}

/// Rough stable-CFL ceiling from the (c + |w|) q^2 / h spectral-radius
/// scaling, with RK4's imaginary-axis limit of 2*sqrt(2).
inline double cfl_warning_threshold(double c, double w_norm, int q) {
  const double q2 = std::max(1, q * q);
  return 2.0 * std::sqrt(2.0) / ((c + w_norm) * q2);
}

}  // namespace awdg
