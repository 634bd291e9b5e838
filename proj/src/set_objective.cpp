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

#include "robsub/set_objective.hpp"

namespace robsub {

VectorXd SetObjective::marginals(ItemSpan s, SampleSpec spec) const {
  const int n = ground_size();
  VectorXd out(n);
  const double base = value(s, spec);
  for (int i = 0; i < n; ++i) {
    if (contains(s, i)) {
      out[i] = base - value(without_item(s, i), spec);
    } else {
      out[i] = value(with_item(s, i), spec) - base;
    }
  }
  return out;
}

namespace {

class DifferenceEvaluator final : public IncrementalEvaluator {
 public:
  DifferenceEvaluator(const SetObjective& f, SampleSpec spec) : f_(f), spec_(spec) {}
  double gain(int item) const override {
    if (contains(set_, item)) return 0.0;
    return f_.value(with_item(set_, item), spec_) - base_;
  }
  void add(int item) override {
    if (contains(set_, item)) return;
    set_ = with_item(set_, item);
    base_ = f_.value(set_, spec_);
  }
  const ItemSet& current() const override { return set_; }

 private:
  const SetObjective& f_;
  SampleSpec spec_;
  ItemSet set_;
  double base_ = 0.0;
};

class SumEvaluator final : public IncrementalEvaluator {
 public:
  SumEvaluator(std::vector<std::unique_ptr<IncrementalEvaluator>> parts, std::vector<double> coefs)
      : parts_(std::move(parts)), coefs_(std::move(coefs)) {}
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

}  // namespace

std::unique_ptr<IncrementalEvaluator> SetObjective::incremental(SampleSpec spec) const {
  return std::make_unique<DifferenceEvaluator>(*this, spec);
}

double SetObjective::singleton_bound() const {
  double best = 0.0;
  for (int j = 0; j < ground_size(); ++j) {
    const ItemSet single{j};
    best = std::max(best, exact_or_estimate(*this, single));
  }
  return best;
}

double exact_or_estimate(const SetObjective& f, ItemSpan s, SampleSpec spec) {
  if (auto exact = f.exact_value(s)) return *exact;
  return f.value(s, spec);
}

// ---------------------------------------------------------------------------

ModularObjective::ModularObjective(VectorXd weights) : weights_(std::move(weights)) {
  if ((weights_.array() < 0.0).any()) throw ParameterError("modular objective: negative weight");
}

double ModularObjective::value(ItemSpan s, SampleSpec) const {
  double total = 0.0;
  for (int i : s) total += weights_[i];
  return total;
}

// ---------------------------------------------------------------------------

ProbabilisticCoverage::ProbabilisticCoverage(int items, std::vector<Link> links,
                                             VectorXd target_weights)
    : items_(items), links_(std::move(links)), weights_(std::move(target_weights)) {
  if (items < 0) throw ParameterError("coverage: negative item count");
  if ((weights_.array() < 0.0).any()) throw ParameterError("coverage: negative target weight");
  for (const auto& l : links_) {
    if (l.item < 0 || l.item >= items_ || l.target < 0 || l.target >= weights_.size())
      throw InputError("coverage: link out of range");
    if (!(l.prob >= 0.0 && l.prob <= 1.0)) throw InputError("coverage: link probability outside [0,1]");
  }
  std::stable_sort(links_.begin(), links_.end(),
                   [](const Link& a, const Link& b) { return a.item < b.item; });
  item_offsets_.assign(static_cast<std::size_t>(items_) + 1, 0);
  for (const auto& l : links_) ++item_offsets_[static_cast<std::size_t>(l.item) + 1];
  for (int i = 0; i < items_; ++i)
    item_offsets_[static_cast<std::size_t>(i) + 1] += item_offsets_[static_cast<std::size_t>(i)];
}

ProbabilisticCoverage ProbabilisticCoverage::coverage(const std::vector<std::vector<int>>& sets,
                                                      VectorXd target_weights) {
  std::vector<Link> links;
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (int t : sets[i]) links.push_back({static_cast<int>(i), t, 1.0});
  return ProbabilisticCoverage(static_cast<int>(sets.size()), std::move(links),
                               std::move(target_weights));
}

ProbabilisticCoverage ProbabilisticCoverage::reweighted(VectorXd target_weights) const {
  if (target_weights.size() != weights_.size())
    throw InputError("coverage: weight vector has the wrong length");
  ProbabilisticCoverage out = *this;
  if ((target_weights.array() < 0.0).any()) throw ParameterError("coverage: negative target weight");
  out.weights_ = std::move(target_weights);
  return out;
}

VectorXd ProbabilisticCoverage::reach_probability(ItemSpan s) const {
  VectorXd miss = VectorXd::Ones(weights_.size());
  for (int i : s) {
    if (i < 0 || i >= items_) throw InputError("coverage: item out of range");
    for (auto k = item_offsets_[static_cast<std::size_t>(i)];
         k < item_offsets_[static_cast<std::size_t>(i) + 1]; ++k)
      miss[links_[k].target] *= 1.0 - links_[k].prob;
  }
  return VectorXd::Ones(weights_.size()) - miss;
}

VectorXd ProbabilisticCoverage::reach_probability(const VectorXd& x) const {
  VectorXd miss = VectorXd::Ones(weights_.size());
  for (const auto& l : links_) miss[l.target] *= 1.0 - x[l.item] * l.prob;
  return VectorXd::Ones(weights_.size()) - miss;
}

double ProbabilisticCoverage::value(ItemSpan s, SampleSpec) const {
  return weights_.dot(reach_probability(s));
}

ProbabilisticCoverage::MissState ProbabilisticCoverage::miss_state(ItemSpan s) const {
  MissState state{VectorXd::Ones(weights_.size()), Eigen::VectorXi::Zero(weights_.size())};
  for (int i : s) absorb(state, i);
  return state;
}

void ProbabilisticCoverage::absorb(MissState& state, int item) const {
  for (auto k = item_offsets_[static_cast<std::size_t>(item)];
       k < item_offsets_[static_cast<std::size_t>(item) + 1]; ++k) {
    const auto& l = links_[k];
    if (l.prob >= 1.0) {
      ++state.certain[l.target];
    } else {
      state.soft[l.target] *= 1.0 - l.prob;
    }
  }
}

// Miss probabilities excluding a member are recovered without dividing by
// zero because certain links are counted rather than multiplied in.
double ProbabilisticCoverage::item_gain(const MissState& state, int item, bool member) const {
  double gain = 0.0;
  for (auto k = item_offsets_[static_cast<std::size_t>(item)];
       k < item_offsets_[static_cast<std::size_t>(item) + 1]; ++k) {
    const auto& l = links_[k];
    double miss_without;  // miss probability of the target under S - item
    if (member) {
      if (l.prob >= 1.0) {
        miss_without = state.certain[l.target] > 1 ? 0.0 : state.soft[l.target];
      } else {
        miss_without =
            state.certain[l.target] > 0 ? 0.0 : state.soft[l.target] / (1.0 - l.prob);
      }
    } else {
      miss_without = state.certain[l.target] > 0 ? 0.0 : state.soft[l.target];
    }
    gain += weights_[l.target] * l.prob * miss_without;
  }
  return gain;
}

VectorXd ProbabilisticCoverage::marginals(ItemSpan s, SampleSpec) const {
  const MissState state = miss_state(s);
  VectorXd out(items_);
  for (int i = 0; i < items_; ++i) out[i] = item_gain(state, i, contains(s, i));
  return out;
}

class ProbabilisticCoverage::Incremental final : public IncrementalEvaluator {
 public:
  explicit Incremental(const ProbabilisticCoverage& f) : f_(f), state_(f.miss_state({})) {}
  double gain(int item) const override {
    return contains(set_, item) ? 0.0 : f_.item_gain(state_, item, false);
  }
  void add(int item) override {
    if (contains(set_, item)) return;
    f_.absorb(state_, item);
    set_ = with_item(set_, item);
  }
  const ItemSet& current() const override { return set_; }

 private:
  const ProbabilisticCoverage& f_;
  MissState state_;
  ItemSet set_;
};

std::unique_ptr<IncrementalEvaluator> ProbabilisticCoverage::incremental(SampleSpec) const {
  return std::make_unique<Incremental>(*this);
}

std::optional<double> ProbabilisticCoverage::multilinear_closed_form(const VectorXd& x) const {
  return weights_.dot(reach_probability(x));
}

std::optional<VectorXd> ProbabilisticCoverage::multilinear_gradient_closed_form(
    const VectorXd& x) const {
  // dF/dx_i = sum_v w_v p_iv prod_{j != i} (1 - x_j p_jv). Zero factors are
  // counted separately so the leave-one-out product needs no division by 0.
  const auto m = weights_.size();
  VectorXd nonzero_product = VectorXd::Ones(m);
  Eigen::VectorXi zeros = Eigen::VectorXi::Zero(m);
  for (const auto& l : links_) {
    const double factor = 1.0 - x[l.item] * l.prob;
    if (factor <= 0.0) {
      ++zeros[l.target];
    } else {
      nonzero_product[l.target] *= factor;
    }
  }
  VectorXd grad = VectorXd::Zero(items_);
  for (const auto& l : links_) {
    const double factor = 1.0 - x[l.item] * l.prob;
    double others;
    if (factor <= 0.0) {
      others = zeros[l.target] > 1 ? 0.0 : nonzero_product[l.target];
    } else {
      others = zeros[l.target] > 0 ? 0.0 : nonzero_product[l.target] / factor;
    }
    grad[l.item] += weights_[l.target] * l.prob * others;
  }
  return grad;
}

// ---------------------------------------------------------------------------

WeightedSumObjective::WeightedSumObjective(std::vector<ObjectivePtr> members,
                                           VectorXd coefficients)
    : members_(std::move(members)), coefficients_(std::move(coefficients)) {
  if (members_.empty()) throw ParameterError("weighted sum: no members");
  if (static_cast<std::size_t>(coefficients_.size()) != members_.size())
    throw ParameterError("weighted sum: coefficient count mismatch");
  if ((coefficients_.array() < 0.0).any()) throw ParameterError("weighted sum: negative coefficient");
  for (const auto& m : members_)
    if (m->ground_size() != members_.front()->ground_size())
      throw ParameterError("weighted sum: members disagree on ground set");
}

int WeightedSumObjective::ground_size() const { return members_.front()->ground_size(); }

double WeightedSumObjective::value(ItemSpan s, SampleSpec spec) const {
  double total = 0.0;
  for (std::size_t j = 0; j < members_.size(); ++j)
    if (coefficients_[static_cast<Eigen::Index>(j)] > 0.0)
      total += coefficients_[static_cast<Eigen::Index>(j)] * members_[j]->value(s, spec);
  return total;
}

bool WeightedSumObjective::stochastic() const {
  return std::any_of(members_.begin(), members_.end(), [](const auto& m) { return m->stochastic(); });
}

bool WeightedSumObjective::monotone() const {
  return std::all_of(members_.begin(), members_.end(), [](const auto& m) { return m->monotone(); });
}

std::optional<double> WeightedSumObjective::exact_value(ItemSpan s) const {
  double total = 0.0;
  for (std::size_t j = 0; j < members_.size(); ++j) {
    const double c = coefficients_[static_cast<Eigen::Index>(j)];
    if (c <= 0.0) continue;
    auto v = members_[j]->exact_value(s);
    if (!v) return std::nullopt;
    total += c * *v;
  }
  return total;
}

VectorXd WeightedSumObjective::marginals(ItemSpan s, SampleSpec spec) const {
  VectorXd out = VectorXd::Zero(ground_size());
  for (std::size_t j = 0; j < members_.size(); ++j) {
    const double c = coefficients_[static_cast<Eigen::Index>(j)];
    if (c > 0.0) out += c * members_[j]->marginals(s, spec);
  }
  return out;
}

std::unique_ptr<IncrementalEvaluator> WeightedSumObjective::incremental(SampleSpec spec) const {
  std::vector<std::unique_ptr<IncrementalEvaluator>> parts;
  std::vector<double> coefs;
  for (std::size_t j = 0; j < members_.size(); ++j) {
    const double c = coefficients_[static_cast<Eigen::Index>(j)];
    if (c <= 0.0) continue;
    parts.push_back(members_[j]->incremental(spec));
    coefs.push_back(c);
  }
  return std::make_unique<SumEvaluator>(std::move(parts), std::move(coefs));
}

double ExactView::value(ItemSpan s, SampleSpec) const {
  auto v = inner_->exact_value(s);
  if (!v) throw UnsupportedError("objective has no exact evaluator");
  return *v;
}

}  // namespace robsub
