#pragma once

namespace lasekk {

/// One classical fourth-order Runge-Kutta step of y' = rhs(t, y).
///
/// State may be a plain scalar or any fixed-size Eigen vector; the
/// arithmetic is written so Eigen can fuse it into one expression.
template <typename State, typename Scalar, typename Rhs>
State rk4_step(const Rhs& rhs, Scalar t, const State& y, Scalar h) {
  const Scalar half = h / Scalar(2);
  const State k1 = rhs(t, y);
  const State k2 = rhs(t + half, State(y + half * k1));
  const State k3 = rhs(t + half, State(y + half * k2));
  const State k4 = rhs(t + h, State(y + h * k3));
  return y + (h / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
}

}  // namespace lasekk
