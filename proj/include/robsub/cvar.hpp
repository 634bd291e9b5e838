// Copyright 2026 The Authors.
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

#include "robsub/common.hpp"

namespace robsub {

// Risk measures of a weighted empirical distribution (values[k] with
// probability weights[k] / sum(weights)). alpha is the lower-tail mass.

// inf { tau : Pr[F <= tau] >= alpha }.
double var_alpha(std::span<const double> values, std::span<const double> weights, double alpha);

// Mean of the lowest mass alpha, splitting the atom at the boundary so
// exactly alpha is counted; alpha = 1 gives the mean.
double cvar_alpha(std::span<const double> values, std::span<const double> weights, double alpha);

// H(tau) = tau - E[(tau - F)^+] / alpha. Its maximum over tau is the CVaR.
double h_objective(std::span<const double> values, std::span<const double> weights, double alpha,
                   double tau);

// Quadratic smoothing of (t)^+ with width u: 0 for t <= 0, t^2/2u up to u,
// t - u/2 beyond. The slope is clamp(t/u, 0, 1).
inline double smooth_hinge(double t, double u) {
  if (t <= 0.0) return 0.0;
  if (t <= u) return t * t / (2.0 * u);
  return t - 0.5 * u;
}
inline double smooth_hinge_slope(double t, double u) { return std::clamp(t / u, 0.0, 1.0); }

// H_u(tau) = tau - E[smooth_hinge(tau - F)] / alpha.
double h_smooth(std::span<const double> values, std::span<const double> weights, double alpha,
                double tau, double u);

// Maximizer of H_u on [0, upper] by bisection on the nonincreasing derivative
// 1 - E[slope(tau - F)] / alpha, to tolerance u / 10.
double smooth_tau(std::span<const double> values, std::span<const double> weights, double alpha,
                  double u, double upper);

void check_alpha(double alpha);

}  // namespace robsub
