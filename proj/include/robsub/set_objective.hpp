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
#include <optional>
#include <vector>

#include "robsub/common.hpp"

namespace robsub {

// Sampling request for stochastic objectives. samples == 0 means "use the
// objective's own default"; deterministic objectives ignore it.
struct SampleSpec {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// Running evaluation of f(S + i) - f(S) as items are added to S. Greedy (plain
// and lazy) reads every gain through one of these, so both variants see
// bit-identical numbers.
class IncrementalEvaluator {
 public:
  virtual ~IncrementalEvaluator() = default;
  virtual double gain(int item) const = 0;
  virtual void add(int item) = 0;
  virtual const ItemSet& current() const = 0;
};

// Normalized set function over items 0..n-1: value(empty) == 0.
//
// Stochastic objectives return a common-random-number estimate that is a
// deterministic function of (set, spec); where feasible they also expose an
// exact evaluator, which oracles and tests use.
class SetObjective {
 public:
  virtual ~SetObjective() = default;

  virtual int ground_size() const = 0;
  virtual double value(ItemSpan s, SampleSpec spec = {}) const = 0;

  virtual bool monotone() const { return true; }
  virtual bool stochastic() const { return false; }

  virtual std::optional<double> exact_value(ItemSpan s) const {
    if (stochastic()) return std::nullopt;
    return value(s);
  }

  // f(S + i) - f(S - i) for every item i. The default costs n evaluations.
  virtual VectorXd marginals(ItemSpan s, SampleSpec spec = {}) const;

  // Default: value differences against a cached f(S).
  virtual std::unique_ptr<IncrementalEvaluator> incremental(SampleSpec spec = {}) const;

  // Closed-form multilinear extension and its gradient, when available.
  virtual std::optional<double> multilinear_closed_form(const VectorXd&) const {
    return std::nullopt;
  }
  virtual std::optional<VectorXd> multilinear_gradient_closed_form(const VectorXd&) const {
    return std::nullopt;
  }

  // max_j f({j}); uses exact values when available.
  double singleton_bound() const;
};

using ObjectivePtr = std::shared_ptr<const SetObjective>;

// f(S) = sum of w_i over S, w >= 0.
class ModularObjective final : public SetObjective {
 public:
  explicit ModularObjective(VectorXd weights);

  int ground_size() const override { return static_cast<int>(weights_.size()); }
  double value(ItemSpan s, SampleSpec = {}) const override;
  VectorXd marginals(ItemSpan, SampleSpec = {}) const override { return weights_; }
  std::optional<double> multilinear_closed_form(const VectorXd& x) const override {
    return weights_.dot(x);
  }
  std::optional<VectorXd> multilinear_gradient_closed_form(const VectorXd&) const override {
    return weights_;
  }
  const VectorXd& weights() const { return weights_; }

 private:
  VectorXd weights_;
};

// Probabilistic weighted coverage: items reach targets independently,
//   f(S) = sum_v w_v * (1 - prod_{i in S} (1 - p_iv)).
// With every p_iv = 1 this is weighted set coverage.
class ProbabilisticCoverage final : public SetObjective {
 public:
  struct Link {
    int item = 0;
    int target = 0;
    double prob = 1.0;
  };

  ProbabilisticCoverage(int items, std::vector<Link> links, VectorXd target_weights);

  // Plain coverage: sets[i] lists the targets covered by item i.
  static ProbabilisticCoverage coverage(const std::vector<std::vector<int>>& sets,
                                        VectorXd target_weights);

  int ground_size() const override { return items_; }
  int num_targets() const { return static_cast<int>(weights_.size()); }
  double value(ItemSpan s, SampleSpec = {}) const override;
  VectorXd marginals(ItemSpan s, SampleSpec = {}) const override;
  std::optional<double> multilinear_closed_form(const VectorXd& x) const override;
  std::optional<VectorXd> multilinear_gradient_closed_form(const VectorXd& x) const override;
  std::unique_ptr<IncrementalEvaluator> incremental(SampleSpec = {}) const override;

  const VectorXd& target_weights() const { return weights_; }
  const std::vector<Link>& links() const { return links_; }
  // Same link structure with different target weights.
  ProbabilisticCoverage reweighted(VectorXd target_weights) const;

  // Probability that each target is reached by S.
  VectorXd reach_probability(ItemSpan s) const;
  // Probability that each target is reached when item i is included
  // independently with probability x_i.
  VectorXd reach_probability(const VectorXd& x) const;

 private:
  class Incremental;
  // Miss probability of each target, split into the product of uncertain
  // links and a count of certain (p = 1) links.
  struct MissState {
    VectorXd soft;
    Eigen::VectorXi certain;
  };
  MissState miss_state(ItemSpan s) const;
  void absorb(MissState& state, int item) const;
  double item_gain(const MissState& state, int item, bool member) const;

  int items_;
  std::vector<Link> links_;  // sorted by item
  std::vector<std::size_t> item_offsets_;
  VectorXd weights_;
};

// sum_j c_j f_j(S) with c >= 0.
class WeightedSumObjective final : public SetObjective {
 public:
  WeightedSumObjective(std::vector<ObjectivePtr> members, VectorXd coefficients);

  int ground_size() const override;
  double value(ItemSpan s, SampleSpec spec = {}) const override;
  bool stochastic() const override;
  bool monotone() const override;
  std::optional<double> exact_value(ItemSpan s) const override;
  VectorXd marginals(ItemSpan s, SampleSpec spec = {}) const override;
  std::unique_ptr<IncrementalEvaluator> incremental(SampleSpec spec = {}) const override;

  const std::vector<ObjectivePtr>& members() const { return members_; }
  const VectorXd& coefficients() const { return coefficients_; }

 private:
  std::vector<ObjectivePtr> members_;
  VectorXd coefficients_;
};

// Evaluates a stochastic objective through its exact evaluator; used where an
// oracle must see the exact function.
class ExactView final : public SetObjective {
 public:
  explicit ExactView(ObjectivePtr inner) : inner_(std::move(inner)) {}
  int ground_size() const override { return inner_->ground_size(); }
  double value(ItemSpan s, SampleSpec = {}) const override;
  bool monotone() const override { return inner_->monotone(); }

 private:
  ObjectivePtr inner_;
};

// Evaluates with the exact value when available, falling back to the estimate.
double exact_or_estimate(const SetObjective& f, ItemSpan s, SampleSpec spec = {});

}  // namespace robsub
