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

#include "robsub/set_objective.hpp"

namespace robsub {

// S ~ x: item i included independently with probability x_i.
ItemSet sample_independent(const VectorXd& x, Rng& rng);

// Subset for sample r of a multilinear estimate; shared by every member
// evaluated at the same (x, seed), which gives common random numbers.
inline ItemSet multilinear_draw(const VectorXd& x, std::uint64_t seed, std::size_t r) {
  Rng rng(derive_seed(seed, r));
  return sample_independent(x, rng);
}

struct MultilinearEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Mean of f(S) over `samples` draws S ~ x. `inner` is forwarded to stochastic
// objectives unchanged.
MultilinearEstimate multilinear_value(const SetObjective& f, const VectorXd& x,
                                      std::size_t samples, std::uint64_t seed,
                                      SampleSpec inner = {});

// Mean over draws S ~ x of f(S + i) - f(S - i), one draw per sample shared by
// every component.
VectorXd multilinear_grad(const SetObjective& f, const VectorXd& x, std::size_t samples,
                          std::uint64_t seed, SampleSpec inner = {});

inline constexpr int kMultilinearExactMaxItems = 20;

// Exact multilinear extension by enumerating the subsets of the support of x.
double multilinear_exact(const SetObjective& f, const VectorXd& x);

// Closed form when the objective has one, otherwise the Monte Carlo estimate.
double multilinear_best(const SetObjective& f, const VectorXd& x, std::size_t samples,
                        std::uint64_t seed);
VectorXd multilinear_grad_best(const SetObjective& f, const VectorXd& x, std::size_t samples,
                               std::uint64_t seed);

void check_fractional_point(const VectorXd& x, int n);

}  // namespace robsub
