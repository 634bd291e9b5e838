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

#include "robsub/multilinear.hpp"

#include <cmath>

namespace robsub {

void check_fractional_point(const VectorXd& x, int n) {
  if (x.size() != n) throw InputError("fractional point has the wrong dimension");
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!(x[i] >= 0.0 && x[i] <= 1.0)) throw InputError("fractional point outside [0,1]^n");
}

ItemSet sample_independent(const VectorXd& x, Rng& rng) {
  ItemSet s;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    // One draw per coordinate keeps the stream aligned across different x.
    const double u = rng.uniform();
    if (u < x[i]) s.push_back(static_cast<int>(i));
  }
  return s;
}

MultilinearEstimate multilinear_value(const SetObjective& f, const VectorXd& x,
                                      std::size_t samples, std::uint64_t seed,
                                      SampleSpec inner) {
  check_fractional_point(x, f.ground_size());
  if (samples == 0) throw ParameterError("multilinear_value: samples must be positive");
  // A vertex has a single outcome; skip the sampling noise entirely.
  if (!f.stochastic() && ((x.array() == 0.0) || (x.array() == 1.0)).all()) {
    ItemSet s;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x[i] == 1.0) s.push_back(static_cast<int>(i));
    return {f.value(s), 0.0};
  }
  const VectorXd sums = blocked_sum(samples, 2, [&](std::size_t r, VectorXd& acc) {
    const double v = f.value(multilinear_draw(x, seed, r), inner);
    acc[0] += v;
    acc[1] += v * v;
  });
  const double count = static_cast<double>(samples);
  const double mean = sums[0] / count;
  const double var = samples > 1 ? std::max(0.0, (sums[1] - count * mean * mean) / (count - 1.0)) : 0.0;
  return {mean, std::sqrt(var / count)};
}

VectorXd multilinear_grad(const SetObjective& f, const VectorXd& x, std::size_t samples,
                          std::uint64_t seed, SampleSpec inner) {
  check_fractional_point(x, f.ground_size());
  if (samples == 0) throw ParameterError("multilinear_grad: samples must be positive");
  const VectorXd sums = blocked_sum(samples, x.size(), [&](std::size_t r, VectorXd& acc) {
    acc += f.marginals(multilinear_draw(x, seed, r), inner);
  });
  return sums / static_cast<double>(samples);
}

double multilinear_exact(const SetObjective& f, const VectorXd& x) {
  check_fractional_point(x, f.ground_size());
  std::vector<int> support;
  ItemSet sure;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] >= 1.0) {
      sure.push_back(static_cast<int>(i));
    } else if (x[i] > 0.0) {
      support.push_back(static_cast<int>(i));
    }
  }
  if (static_cast<int>(support.size()) > kMultilinearExactMaxItems)
    throw SizeError("multilinear_exact: too many fractional coordinates");
  const std::size_t count = std::size_t{1} << support.size();
  std::vector<double> terms(count);
  parallel_for(count, [&](std::size_t mask) {
    double prob = 1.0;
    ItemSet s = sure;
    for (std::size_t b = 0; b < support.size(); ++b) {
      const int i = support[b];
      if (mask & (std::size_t{1} << b)) {
        prob *= x[i];
        s.push_back(i);
      } else {
        prob *= 1.0 - x[i];
      }
    }
    terms[mask] = prob * exact_or_estimate(f, normalized(std::move(s)));
  });
  return pairwise_sum(terms);
}

double multilinear_best(const SetObjective& f, const VectorXd& x, std::size_t samples,
                        std::uint64_t seed) {
  if (auto v = f.multilinear_closed_form(x)) return *v;
  return multilinear_value(f, x, samples, seed).value;
}

VectorXd multilinear_grad_best(const SetObjective& f, const VectorXd& x, std::size_t samples,
                               std::uint64_t seed) {
  if (auto g = f.multilinear_gradient_closed_form(x)) return *g;
  return multilinear_grad(f, x, samples, seed);
}

}  // namespace robsub
