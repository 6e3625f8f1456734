// Copyright 2026 The softtwin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Core>

namespace softtwin {

template <typename Scalar>
using State2 = Eigen::Matrix<Scalar, 2, 1>;

/// One classical fourth-order Runge-Kutta step of y' = f(t, y).
///
/// `Vector` is any Eigen fixed or dynamic vector; `f` returns the same type.
template <typename Vector, typename Scalar, typename Rhs>
Vector rk4_step(const Rhs& f, Scalar t, const Vector& y, Scalar h) {
  const Scalar half = h / Scalar(2);
  const Vector k1 = f(t, y);
  const Vector k2 = f(t + half, (y + half * k1).eval());
  const Vector k3 = f(t + half, (y + half * k2).eval());
  const Vector k4 = f(t + h, (y + h * k3).eval());
  return y + (h / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
}

/// Mass-normalized linear oscillator driven by a pressure that varies
/// linearly across the step: theta'' + c theta' + k theta = g p(t).
template <typename Scalar>
struct LinearOscillator {
  Scalar damping;    // c = 2 zeta omega_n
  Scalar stiffness;  // k = omega_n^2
  Scalar gain;       // g
  Scalar p_begin;
  Scalar p_end;
  Scalar t0;
  Scalar dt;

  State2<Scalar> operator()(Scalar t, const State2<Scalar>& y) const {
    const Scalar s = (t - t0) / dt;
    const Scalar p = p_begin + (p_end - p_begin) * s;
    State2<Scalar> dy;
    dy << y(1), gain * p - damping * y(1) - stiffness * y(0);
    return dy;
  }
};

}  // namespace softtwin
