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

#include "robsub/equator.hpp"

#include "robsub/lp.hpp"
#include "robsub/multilinear.hpp"

namespace robsub {

ObjectiveFamily::ObjectiveFamily(std::vector<ObjectivePtr> members) : members_(std::move(members)) {
  if (members_.empty()) throw ParameterError("objective family: no members");
  for (const auto& f : members_) {
    if (!f) throw ParameterError("objective family: null member");
    if (f->ground_size() != members_.front()->ground_size())
      throw ParameterError("objective family: members disagree on ground set");
    if (!f->monotone()) throw ParameterError("objective family: member not monotone");
    const double empty = exact_or_estimate(*f, ItemSet{});
    if (empty != 0.0) throw ParameterError("objective family: member not normalized");
    bound_ = std::max(bound_, f->singleton_bound());
  }
}

int bri_enumerative(const ObjectiveFamily& family, const VectorXd& x, std::size_t samples,
                    std::uint64_t seed) {
  check_fractional_point(x, family.ground_size());
  if (samples == 0) throw ParameterError("bri: samples must be positive");
  const int m = family.size();
  const VectorXd sums = blocked_sum(samples, m, [&](std::size_t r, VectorXd& acc) {
    const ItemSet s = multilinear_draw(x, seed, r);
    for (int j = 0; j < m; ++j) acc[j] += family.member(j)->value(s);
  });
  Eigen::Index best = 0;
  sums.minCoeff(&best);  // first minimum
  return static_cast<int>(best);
}

BriResponse EnumerativeBri::respond(const VectorXd& x, std::uint64_t seed) const {
  const int m = family_.size();
  bool all_closed = closed_form_;
  for (int j = 0; j < m && all_closed; ++j)
    all_closed = family_.member(j)->multilinear_closed_form(x).has_value();
  int best = 0;
  if (all_closed) {
    double best_value = 0.0;
    for (int j = 0; j < m; ++j) {
      const double v = *family_.member(j)->multilinear_closed_form(x);
      if (j == 0 || v < best_value) {
        best = j;
        best_value = v;
      }
    }
  } else {
    best = bri_enumerative(family_, x, samples_, seed);
  }
  return {family_.member(best), best};
}

void EquatorConfig::validate() const {
  if (!(epsilon > 0.0) || !(delta > 0.0) || delta >= 1.0)
    throw ParameterError("equator: epsilon and delta must be positive (delta < 1)");
  if (iterations <= 0 || grad_samples == 0 || eval_samples == 0 || strategy_samples == 0)
    throw ParameterError("equator: counts must be positive");
}

EquatorResult equator_solve(const BestResponseOracle& bri, const Constraint& c,
                            const EquatorConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const int n = c.ground_size();
  if (bri.ground_size() != n) throw InputError("equator: oracle and constraint disagree on ground set");
  if (cfg.epsilon > bri.bound() && bri.bound() > 0.0)
    throw ParameterError("equator: epsilon exceeds the value bound M");

  EquatorResult out;
  out.x = VectorXd::Zero(n);
  const double step = 1.0 / cfg.iterations;
  for (int t = 0; t < cfg.iterations; ++t) {
    const auto br = bri.respond(out.x, derive_seed(seed, 1, static_cast<std::uint64_t>(t)));
    out.bri_trace.push_back(br.index);
    const VectorXd grad =
        cfg.closed_form
            ? multilinear_grad_best(*br.member, out.x, cfg.grad_samples,
                                    derive_seed(seed, 2, static_cast<std::uint64_t>(t)))
            : multilinear_grad(*br.member, out.x, cfg.grad_samples,
                               derive_seed(seed, 2, static_cast<std::uint64_t>(t)));
    ItemSet v = c.max_weight_independent(grad);
    for (int i : v) out.x[i] += step;
    out.vertices.push_back({std::move(v), step});
  }
  out.x = out.x.cwiseMin(1.0);  // roundoff only: each coordinate gains at most 1/K per step
  out.strategy = sparse_strategy(out.vertices, c, cfg.strategy_samples, derive_seed(seed, 3));
  return out;
}

EquatorResult equator_solve(const ObjectiveFamily& family, const Constraint& c,
                            const EquatorConfig& cfg, std::uint64_t seed) {
  EnumerativeBri bri(family, cfg.eval_samples, cfg.closed_form);
  return equator_solve(bri, c, cfg, seed);
}

ItemSet sample_pure_strategy(const VectorXd& x, const Constraint& c, std::uint64_t seed) {
  return swap_round(x, c, seed);
}

MixedStrategy sparse_strategy(const std::vector<WeightedSet>& combination, const Constraint& c,
                              std::size_t count, std::uint64_t seed) {
  if (count == 0) throw ParameterError("sparse strategy: count must be positive");
  // Merge repeated vertices first; swap rounding cost grows with support size.
  const MixedStrategy merged(combination);
  std::vector<ItemSet> draws(count);
  parallel_for(count, [&](std::size_t s) { draws[s] = swap_round(merged.support(), c, derive_seed(seed, s)); });
  return MixedStrategy::uniform(draws);
}

VectorXd member_values(const MixedStrategy& strategy, const ObjectiveFamily& family,
                       SampleSpec spec) {
  const int m = family.size();
  VectorXd out = VectorXd::Zero(m);
  std::vector<VectorXd> rows(strategy.size());
  parallel_for(strategy.size(), [&](std::size_t k) {
    rows[k].resize(m);
    for (int j = 0; j < m; ++j)
      rows[k][j] = exact_or_estimate(*family.member(j), strategy.support()[k].set, spec);
  });
  for (std::size_t k = 0; k < rows.size(); ++k) out += strategy.support()[k].weight * rows[k];
  return out;
}

double worst_case_value(const MixedStrategy& strategy, const ObjectiveFamily& family,
                        SampleSpec spec) {
  return member_values(strategy, family, spec).minCoeff();
}

ItemSet nominal_greedy(const ObjectiveFamily& family, const Constraint& c, SampleSpec spec) {
  const WeightedSumObjective mean(family.members(),
                                  VectorXd::Constant(family.size(), 1.0 / family.size()));
  return greedy_maximize(mean, c, spec, GreedyVariant::lazy);
}

DoubleOracleResult double_oracle_solve(const ObjectiveFamily& family, const Constraint& c,
                                       const DoubleOracleConfig& cfg) {
  if (family.ground_size() != c.ground_size())
    throw InputError("double oracle: family and constraint disagree on ground set");
  const int m = family.size();
  DoubleOracleProblem problem;
  problem.pool_size = m;
  problem.payoff_row = [&](const ItemSet& s) {
    VectorXd row(m);
    for (int j = 0; j < m; ++j) row[j] = exact_or_estimate(*family.member(j), s, cfg.eval);
    return row;
  };
  problem.best_response = [&](const VectorXd& weights) {
    const WeightedSumObjective mixture(family.members(), weights);
    return greedy_maximize(mixture, c, cfg.eval, GreedyVariant::lazy);
  };
  problem.initial = nominal_greedy(family, c, cfg.eval);
  return run_double_oracle(problem, cfg);
}

MinimaxSolution exact_minimax_lp(const ObjectiveFamily& family, const Constraint& c,
                                 std::size_t set_cap, int member_cap) {
  if (family.size() > member_cap) throw SizeError("exact minimax: too many members");
  const auto sets = enumerate_independent_sets(c, true, set_cap);
  const int m = family.size();
  MatrixXd payoff(static_cast<Eigen::Index>(sets.size()), m);
  parallel_for(sets.size(), [&](std::size_t i) {
    for (int j = 0; j < m; ++j)
      payoff(static_cast<Eigen::Index>(i), j) = exact_or_estimate(*family.member(j), sets[i]);
  });
  const auto game = solve_matrix_game<double>(payoff);
  MinimaxSolution out;
  out.value = game.value;
  out.maximizer = mixed_strategy_from(sets, game.row_strategy);
  out.adversary = game.col_strategy;
  out.feasible_sets = sets.size();
  return out;
}

}  // namespace robsub
