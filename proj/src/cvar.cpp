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

#include "robsub/cvar.hpp"

#include <numeric>

namespace robsub {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("risk level alpha must lie in (0, 1]");
}

namespace {

struct Sorted {
  std::vector<double> values;
  std::vector<double> probs;  // normalized
};

Sorted sorted_distribution(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) throw InputError("risk measure: empty scenario set");
  if (values.size() != weights.size()) throw InputError("risk measure: weight count mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InputError("risk measure: negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw InputError("risk measure: zero total weight");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  Sorted s;
  for (std::size_t k : order) {
    s.values.push_back(values[k]);
    s.probs.push_back(weights[k] / total);
  }
  return s;
}

double weighted_mean_of(std::span<const double> values, std::span<const double> weights,
                        const std::function<double(double)>& fn) {
  double total = 0.0;
  std::vector<double> terms(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    terms[k] = weights[k] * fn(values[k]);
    total += weights[k];
  }
  if (!(total > 0.0)) throw InputError("risk measure: zero total weight");
  return pairwise_sum(terms) / total;
}

}  // namespace

double var_alpha(std::span<const double> values, std::span<const double> weights, double alpha) {
  check_alpha(alpha);
  const auto s = sorted_distribution(values, weights);
  double cumulative = 0.0;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    cumulative += s.probs[k];
    if (cumulative >= alpha - 1e-12) return s.values[k];
  }
  return s.values.back();
}

double cvar_alpha(std::span<const double> values, std::span<const double> weights, double alpha) {
  check_alpha(alpha);
  const auto s = sorted_distribution(values, weights);
  double remaining = alpha;
  double acc = 0.0;
  for (std::size_t k = 0; k < s.values.size() && remaining > 0.0; ++k) {
    const double take = std::min(remaining, s.probs[k]);
    acc += take * s.values[k];
    remaining -= take;
  }
  // Weights that sum to slightly under 1 leave a roundoff remainder.
  if (remaining > 0.0) acc += remaining * s.values.back();
  return acc / alpha;
}

double h_objective(std::span<const double> values, std::span<const double> weights, double alpha,
                   double tau) {
  check_alpha(alpha);
  return tau - weighted_mean_of(values, weights, [tau](double f) { return std::max(0.0, tau - f); }) / alpha;
}

double h_smooth(std::span<const double> values, std::span<const double> weights, double alpha,
                double tau, double u) {
  check_alpha(alpha);
  if (!(u > 0.0)) throw ParameterError("smoothing width must be positive");
  return tau - weighted_mean_of(values, weights, [tau, u](double f) { return smooth_hinge(tau - f, u); }) / alpha;
}

double smooth_tau(std::span<const double> values, std::span<const double> weights, double alpha,
                  double u, double upper) {
  check_alpha(alpha);
  if (!(u > 0.0)) throw ParameterError("smoothing width must be positive");
  if (!(upper >= 0.0)) throw ParameterError("smooth_tau: negative upper bound");
  auto slope = [&](double tau) {
    return 1.0 - weighted_mean_of(values, weights, [tau, u](double f) { return smooth_hinge_slope(tau - f, u); }) / alpha;
  };
  double lo = 0.0;
  double hi = upper;
  if (slope(hi) > 0.0) return hi;
  if (slope(lo) <= 0.0) return lo;
  while (hi - lo > u / 10.0) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace robsub
