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

#include <memory>
#include <string>

#include "robsub/cascade.hpp"
#include "robsub/equator.hpp"

namespace robsub {

// ---------------------------------------------------------------------------
// Budget allocation. Channels are the ground set (one unit each); customer v
// is reached by channel u with probability p_uv, independently. Profit is
//   f_w(S) = sum_v w_v (1 - prod_{u in S} (1 - p_uv)).

struct BudgetAllocInstance {
  int channels = 0;
  int customers = 0;
  std::vector<ProbabilisticCoverage::Link> links;  // item = channel, target = customer
  int budget = 1;

  void validate() const;
};

// Finite profit family plus the per-customer intervals it was drawn from
// (intervals are empty for hand-built families).
struct ProfitUncertaintySet {
  std::vector<VectorXd> weights;
  VectorXd lo;
  VectorXd hi;
};

std::shared_ptr<const ProbabilisticCoverage> budget_objective(const BudgetAllocInstance& inst,
                                                              const VectorXd& w);
double budget_value(const BudgetAllocInstance& inst, const VectorXd& w, ItemSpan s);

ObjectiveFamily budget_family(const BudgetAllocInstance& inst, const ProfitUncertaintySet& u);
inline Constraint budget_constraint(const BudgetAllocInstance& inst) {
  return Constraint::cardinality(inst.channels, inst.budget);
}

struct RandomInstanceSpec {
  int channels = 20;
  int customers = 40;
  double density = 0.2;      // probability a channel-customer pair is linked
  double p_lo = 0.1;         // link probability range
  double p_hi = 0.5;
  double w_lo_min = 0.0;     // interval lower ends drawn from [w_lo_min, w_lo_max]
  double w_lo_max = 1.0;
  double width_max = 1.0;    // interval widths drawn from [0, width_max]
  int members = 6;           // family size m
  int budget = 3;
};

struct BudgetProblem {
  BudgetAllocInstance instance;
  ProfitUncertaintySet uncertainty;
};

// Reproducible synthetic instance. Half of the family (rounded up) are random
// vertices of the weight box, the rest uniform draws inside it.
BudgetProblem make_random_instance(const RandomInstanceSpec& spec, std::uint64_t seed);

// Instance where member j only values customer group j and every channel
// reaches a single group, so any pure set of budget < groups leaves some
// member with zero profit.
BudgetProblem make_adversarial_instance(int groups, int channels_per_group,
                                        int customers_per_group, int budget, double p,
                                        std::uint64_t seed);

// Exact BRI for weight uncertainty: E_{S~x} f_w(S) = w . r(x) with r the
// closed-form reach probabilities, minimized over the finite family.
class BudgetBri final : public BestResponseOracle {
 public:
  BudgetBri(const BudgetAllocInstance& inst, const ProfitUncertaintySet& u);
  int ground_size() const override { return base_->ground_size(); }
  double bound() const override { return bound_; }
  BriResponse respond(const VectorXd& x, std::uint64_t seed) const override;

 private:
  std::shared_ptr<const ProbabilisticCoverage> base_;
  std::vector<ObjectivePtr> members_;
  MatrixXd weights_;  // m x customers
  double bound_ = 0.0;
};

// JSON: {"channels", "customers", "budget", "links": [[u, v, p], ...],
//        "weights": [[...], ...], optional "lo", "hi"}.
BudgetProblem budget_problem_from_json(const std::string& text);
std::string budget_problem_to_json(const BudgetProblem& problem);

// ---------------------------------------------------------------------------
// Influence spread as a set objective over graph nodes, all seeds at step 1.

class InfluenceObjective final : public SetObjective {
 public:
  enum class Mode { estimate, exact };

  InfluenceObjective(std::shared_ptr<const Graph> g, EdgeParams p, int horizon,
                     std::size_t samples, Mode mode = Mode::estimate);

  int ground_size() const override { return graph_->num_nodes(); }
  double value(ItemSpan s, SampleSpec spec = {}) const override;
  bool stochastic() const override { return mode_ == Mode::estimate; }
  // Exact spread whenever |E| * horizon is within the enumeration cap.
  std::optional<double> exact_value(ItemSpan s) const override;
  VectorXd marginals(ItemSpan s, SampleSpec spec = {}) const override;
  std::unique_ptr<IncrementalEvaluator> incremental(SampleSpec spec = {}) const override;

  const Graph& graph() const { return *graph_; }
  const EdgeParams& params() const { return params_; }
  int horizon() const { return horizon_; }
  bool exact_capable() const;

 private:
  std::size_t samples_for(SampleSpec spec) const { return spec.samples ? spec.samples : samples_; }

  std::shared_ptr<const Graph> graph_;
  EdgeParams params_;
  int horizon_;
  std::size_t samples_;
  Mode mode_;
};

std::shared_ptr<const InfluenceObjective> influence_set_objective(
    std::shared_ptr<const Graph> g, EdgeParams p, int horizon, std::size_t samples,
    InfluenceObjective::Mode mode = InfluenceObjective::Mode::estimate);

}  // namespace robsub
