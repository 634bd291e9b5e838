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

#include "robsub/double_oracle.hpp"

#include <chrono>

#include "robsub/lp.hpp"

namespace robsub {

MixedStrategy mixed_strategy_from(const std::vector<ItemSet>& sets, const VectorXd& weights) {
  std::vector<WeightedSet> support;
  for (std::size_t i = 0; i < sets.size(); ++i)
    support.push_back({sets[i], std::max(0.0, weights[static_cast<Eigen::Index>(i)])});
  return MixedStrategy(std::move(support));
}

DoubleOracleResult run_double_oracle(const DoubleOracleProblem& problem,
                                     const DoubleOracleConfig& cfg) {
  const int m = problem.pool_size;
  if (m <= 0) throw ParameterError("double oracle: empty adversary pool");
  const auto start = std::chrono::steady_clock::now();

  std::vector<ItemSet> sets;
  std::vector<VectorXd> rows;
  auto add_set = [&](ItemSet s) {
    rows.push_back(problem.payoff_row(s));
    if (rows.back().size() != m) throw Error("double oracle: payoff row has the wrong length");
    sets.push_back(std::move(s));
  };
  add_set(problem.initial);
  std::vector<int> pool;
  {
    Eigen::Index j0 = 0;
    rows.front().minCoeff(&j0);
    pool.push_back(static_cast<int>(j0));
  }

  DoubleOracleResult out;
  while (true) {
    ++out.iterations;
    const auto rs = static_cast<Eigen::Index>(sets.size());
    const auto cs = static_cast<Eigen::Index>(pool.size());
    MatrixXd restricted(rs, cs);
    MatrixXd full(rs, m);
    for (Eigen::Index i = 0; i < rs; ++i) {
      full.row(i) = rows[static_cast<std::size_t>(i)].transpose();
      for (Eigen::Index a = 0; a < cs; ++a)
        restricted(i, a) = rows[static_cast<std::size_t>(i)][pool[static_cast<std::size_t>(a)]];
    }
    const auto game = solve_matrix_game<double>(restricted);
    const auto security = solve_matrix_game<double>(full);

    out.game_value = game.value;
    out.game_values.push_back(game.value);
    // The set list only grows, so the security value cannot drop; clamp LP
    // roundoff so the recorded sequence stays monotone.
    out.security_value = out.security_values.empty()
                             ? security.value
                             : std::max(security.value, out.security_values.back());
    out.security_values.push_back(out.security_value);
    out.maximizer = mixed_strategy_from(sets, game.row_strategy);
    out.security_strategy = mixed_strategy_from(sets, security.row_strategy);
    out.adversary = VectorXd::Zero(m);
    for (Eigen::Index a = 0; a < cs; ++a)
      out.adversary[pool[static_cast<std::size_t>(a)]] += std::max(0.0, game.col_strategy[a]);
    out.adversary /= out.adversary.sum();
    out.maximizer_support.push_back(out.maximizer.size());
    out.adversary_support.push_back(static_cast<std::size_t>((out.adversary.array() > 0.0).count()));
    out.elapsed_ms.push_back(
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());

    ItemSet br_set = problem.best_response(out.adversary);
    const auto known = std::find(sets.begin(), sets.end(), br_set);
    const double br_value =
        (known != sets.end() ? rows[static_cast<std::size_t>(known - sets.begin())]
                             : problem.payoff_row(br_set))
            .dot(out.adversary);

    VectorXd against = VectorXd::Zero(m);
    for (Eigen::Index i = 0; i < rs; ++i)
      against += std::max(0.0, game.row_strategy[i]) * rows[static_cast<std::size_t>(i)];
    against /= std::max(1e-300, game.row_strategy.cwiseMax(0.0).sum());
    Eigen::Index br_member = 0;
    const double br_min = against.minCoeff(&br_member);

    out.maximizer_gap = br_value - game.value;
    out.adversary_gap = game.value - br_min;
    if (out.maximizer_gap <= cfg.tol && out.adversary_gap <= cfg.tol) {
      out.converged = true;
      break;
    }
    bool grew = false;
    if (out.maximizer_gap > cfg.tol && known == sets.end()) {
      add_set(std::move(br_set));
      grew = true;
    }
    if (out.adversary_gap > cfg.tol &&
        std::find(pool.begin(), pool.end(), static_cast<int>(br_member)) == pool.end()) {
      pool.push_back(static_cast<int>(br_member));
      grew = true;
    }
    if (!grew) {
      // Both best responses are already in the restricted game, so only LP
      // roundoff separates them from the restricted value.
      out.converged = true;
      break;
    }
    if (out.iterations >= cfg.max_iters) break;
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > cfg.time_limit_seconds) {
      out.timed_out = true;
      break;
    }
  }
  return out;
}

}  // namespace robsub
