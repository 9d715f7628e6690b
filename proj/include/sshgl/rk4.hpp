#pragma once

namespace sshgl {

// One classical fourth-order Runge-Kutta step y <- y + dt*Phi(y).
// Rhs has signature rhs(const State&, State&). Scratch buffers are caller
// owned so the hot loops never allocate.
template <class State, class Rhs>
void rk4_step(State& y, double dt, Rhs&& rhs, State& k1, State& k2, State& k3, State& k4,
              State& tmp) {
  rhs(y, k1);
  tmp = y + (0.5 * dt) * k1;
  rhs(tmp, k2);
  tmp = y + (0.5 * dt) * k2;
  rhs(tmp, k3);
  tmp = y + dt * k3;
  rhs(tmp, k4);
  y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace sshgl
