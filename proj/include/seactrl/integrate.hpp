#pragma once

namespace seactrl {

/// Classical fixed-step fourth-order Runge-Kutta step.
/// S must form a vector space (operator+, scalar operator*); F is
/// (double t, const S&) -> S.
template <class S, class F>
S rk4_step(F&& f, double t, const S& y, double dt) {
  const S k1 = f(t, y);
  const S k2 = f(t + 0.5 * dt, S(y + (0.5 * dt) * k1));
  const S k3 = f(t + 0.5 * dt, S(y + (0.5 * dt) * k2));
  const S k4 = f(t + dt, S(y + dt * k3));
  return S(y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

}  // namespace seactrl
