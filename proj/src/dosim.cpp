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

#include "robsub/dosim.hpp"

#include <cmath>

#include "robsub/greedy.hpp"

namespace robsub {

IntervalUncertainty IntervalUncertainty::global(const Graph& g, double lo, double hi) {
  return {VectorXd::Constant(g.num_edges(), lo), VectorXd::Constant(g.num_edges(), hi)};
}

void IntervalUncertainty::validate(const Graph& g) const {
  if (lo.size() != g.num_edges() || hi.size() != g.num_edges())
    throw InputError("intervals: one interval per edge required");
  for (Eigen::Index e = 0; e < lo.size(); ++e)
    if (!(lo[e] >= 0.0 && lo[e] <= hi[e] && hi[e] <= 1.0))
      throw InputError("intervals: need 0 <= lo <= hi <= 1");
}

namespace {

// lo, lo + delta, ... and hi itself (the last step may be shorter).
std::vector<double> axis(double lo, double hi, double delta) {
  std::vector<double> out;
  const double width = hi - lo;
  const auto steps = static_cast<long long>(std::floor(width / delta + 1e-9));
  for (long long s = 0; s <= steps; ++s) out.push_back(std::min(hi, lo + static_cast<double>(s) * delta));
  if (hi - out.back() > 1e-12) out.push_back(hi);
  return out;
}

}  // namespace

ParamGrid discretize_params(const IntervalUncertainty& intervals, double delta, bool coupled,
                            std::size_t cap) {
  if (!(delta > 0.0)) throw ParameterError("discretize: delta must be positive");
  if (intervals.lo.size() != intervals.hi.size()) throw InputError("discretize: interval size mismatch");
  const Eigen::Index m = intervals.lo.size();
  ParamGrid grid;
  grid.spacing = delta;
  if (coupled) {
    const double widest = m > 0 ? (intervals.hi - intervals.lo).maxCoeff() : 0.0;
    if (widest <= 0.0) {
      grid.points.push_back({intervals.lo});
      return grid;
    }
    const auto levels = axis(0.0, 1.0, delta / widest);
    if (levels.size() > cap) throw SizeError("discretize: grid exceeds cap");
    for (double lambda : levels)
      grid.points.push_back({intervals.lo + lambda * (intervals.hi - intervals.lo)});
    return grid;
  }
  std::vector<std::vector<double>> axes;
  double total = 1.0;
  for (Eigen::Index e = 0; e < m; ++e) {
    axes.push_back(axis(intervals.lo[e], intervals.hi[e], delta));
    total *= static_cast<double>(axes.back().size());
    if (total > static_cast<double>(cap)) throw SizeError("discretize: grid exceeds cap");
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  while (true) {
    VectorXd p(m);
    for (Eigen::Index e = 0; e < m; ++e) p[e] = axes[static_cast<std::size_t>(e)][idx[static_cast<std::size_t>(e)]];
    grid.points.push_back({std::move(p)});
    Eigen::Index e = m - 1;
    for (; e >= 0; --e) {
      auto& i = idx[static_cast<std::size_t>(e)];
      if (++i < axes[static_cast<std::size_t>(e)].size()) break;
      i = 0;
    }
    if (e < 0) break;
  }
  return grid;
}

void InfluenceGame::validate() const {
  if (!graph) throw ParameterError("game: null graph");
  intervals.validate(*graph);
  if (budget < 1 || budget > graph->num_nodes()) throw ParameterError("game: need 1 <= K <= n");
  if (horizon < 1) throw ParameterError("game: horizon must be >= 1");
  if (samples < 1) throw ParameterError("game: samples must be >= 1");
}

GamePayoffs::GamePayoffs(const InfluenceGame& game, ParamGrid grid, std::uint64_t seed)
    : game_(game), grid_(std::move(grid)), seed_(seed) {
  game.validate();
  const auto mode = game.opt == OptMode::exact ? InfluenceObjective::Mode::exact
                                               : InfluenceObjective::Mode::estimate;
  const Constraint k = Constraint::cardinality(game.graph->num_nodes(), game.budget);
  for (std::size_t g = 0; g < grid_.points.size(); ++g) {
    objectives_.push_back(influence_set_objective(game.graph, grid_.points[g], game.horizon, game.samples, mode));
    if (game.payoff == PayoffMode::raw) {
      opt_.push_back(1.0);
    } else if (game.opt == OptMode::exact) {
      opt_.push_back(exhaustive_opt(*objectives_.back(), k).value);
    } else {
      const ItemSet s = greedy_maximize(*objectives_.back(), k, spec(g), GreedyVariant::lazy);
      opt_.push_back(objectives_.back()->value(s, spec(g)));
    }
  }
}

SampleSpec GamePayoffs::spec(std::size_t g) const { return {game_.samples, derive_seed(seed_, g)}; }

double GamePayoffs::payoff(const ItemSet& seeds, std::size_t g) const {
  if (static_cast<int>(seeds.size()) > game_.budget) throw InputError("payoff: more seeds than K");
  return objectives_[g]->value(seeds, spec(g)) / opt_[g];
}

VectorXd GamePayoffs::payoff_row(const ItemSet& seeds) const {
  VectorXd row(static_cast<Eigen::Index>(grid_size()));
  parallel_for(grid_size(), [&](std::size_t g) { row[static_cast<Eigen::Index>(g)] = payoff(seeds, g); });
  return row;
}

namespace {

// sum_g c_g spread_g(S) / OPT_g, evaluated with the per-theta sample streams.
class GridMixture final : public SetObjective {
 public:
  GridMixture(const GamePayoffs& payoffs, VectorXd weights) : payoffs_(payoffs), weights_(std::move(weights)) {}
  int ground_size() const override { return payoffs_.spread(0).ground_size(); }
  double value(ItemSpan s, SampleSpec) const override {
    double total = 0.0;
    for (std::size_t g = 0; g < payoffs_.grid_size(); ++g) {
      const double c = weights_[static_cast<Eigen::Index>(g)];
      if (c > 0.0) total += c * payoffs_.spread(g).value(s, payoffs_.spec(g)) / payoffs_.opt(g);
    }
    return total;
  }
  std::unique_ptr<IncrementalEvaluator> incremental(SampleSpec) const override {
    return std::make_unique<Evaluator>(*this);
  }

 private:
  class Evaluator final : public IncrementalEvaluator {
   public:
    explicit Evaluator(const GridMixture& f) {
      for (std::size_t g = 0; g < f.payoffs_.grid_size(); ++g) {
        const double c = f.weights_[static_cast<Eigen::Index>(g)];
        if (c <= 0.0) continue;
        parts_.push_back(f.payoffs_.spread(g).incremental(f.payoffs_.spec(g)));
        coefs_.push_back(c / f.payoffs_.opt(g));
      }
    }
    double gain(int item) const override {
      double total = 0.0;
      for (std::size_t j = 0; j < parts_.size(); ++j) total += coefs_[j] * parts_[j]->gain(item);
      return total;
    }
    void add(int item) override {
      if (contains(set_, item)) return;
      for (auto& p : parts_) p->add(item);
      set_ = with_item(set_, item);
    }
    const ItemSet& current() const override { return set_; }

   private:
    std::vector<std::unique_ptr<IncrementalEvaluator>> parts_;
    std::vector<double> coefs_;
    ItemSet set_;
  };

  const GamePayoffs& payoffs_;
  VectorXd weights_;
};

}  // namespace

ItemSet GamePayoffs::best_response(const VectorXd& grid_weights) const {
  const GridMixture mixture(*this, grid_weights);
  const Constraint k = Constraint::cardinality(game_.graph->num_nodes(), game_.budget);
  return greedy_maximize(mixture, k, {}, GreedyVariant::lazy);
}

double payoff_ratio(const ItemSet& seeds, const EdgeParams& theta, const InfluenceGame& game,
                    std::uint64_t seed) {
  const GamePayoffs payoffs(game, ParamGrid{{theta}, 0.0}, seed);
  return payoffs.payoff(seeds, 0);
}

double worst_grid_payoff(const MixedStrategy& strategy, const GamePayoffs& payoffs) {
  VectorXd expected = VectorXd::Zero(static_cast<Eigen::Index>(payoffs.grid_size()));
  for (const auto& ws : strategy.support()) expected += ws.weight * payoffs.payoff_row(ws.set);
  return expected.minCoeff();
}

DosimResult dosim_solve(const InfluenceGame& game, const DosimConfig& cfg, std::uint64_t seed) {
  game.validate();
  DosimResult out;
  out.grid = discretize_params(game.intervals, cfg.delta_grid, cfg.coupled, cfg.grid_cap);
  const GamePayoffs payoffs(game, out.grid, seed);

  DoubleOracleProblem problem;
  problem.pool_size = static_cast<int>(payoffs.grid_size());
  problem.payoff_row = [&](const ItemSet& s) { return payoffs.payoff_row(s); };
  problem.best_response = [&](const VectorXd& w) { return payoffs.best_response(w); };
  problem.initial = payoffs.best_response(VectorXd::Constant(problem.pool_size, 1.0 / problem.pool_size));
  out.equilibrium = run_double_oracle(problem, cfg.oracle);
  out.worst_grid_ratio = out.equilibrium.security_value;
  out.warning = !out.equilibrium.converged;
  return out;
}

}  // namespace robsub
