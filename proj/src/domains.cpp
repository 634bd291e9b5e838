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

#include "robsub/domains.hpp"

#include <json.hpp>

namespace robsub {

void BudgetAllocInstance::validate() const {
  if (channels < 1 || customers < 1) throw ParameterError("budget instance: need channels and customers");
  if (budget < 0) throw ParameterError("budget instance: negative budget");
  for (const auto& l : links) {
    if (l.item < 0 || l.item >= channels || l.target < 0 || l.target >= customers)
      throw InputError("budget instance: link out of range");
    if (!(l.prob >= 0.0 && l.prob <= 1.0)) throw InputError("budget instance: probability outside [0,1]");
  }
}

std::shared_ptr<const ProbabilisticCoverage> budget_objective(const BudgetAllocInstance& inst,
                                                              const VectorXd& w) {
  inst.validate();
  if (w.size() != inst.customers) throw InputError("budget objective: weight vector length mismatch");
  return std::make_shared<const ProbabilisticCoverage>(inst.channels, inst.links, w);
}

double budget_value(const BudgetAllocInstance& inst, const VectorXd& w, ItemSpan s) {
  return budget_objective(inst, w)->value(s);
}

ObjectiveFamily budget_family(const BudgetAllocInstance& inst, const ProfitUncertaintySet& u) {
  std::vector<ObjectivePtr> members;
  for (const auto& w : u.weights) members.push_back(budget_objective(inst, w));
  return ObjectiveFamily(std::move(members));
}

BudgetProblem make_random_instance(const RandomInstanceSpec& spec, std::uint64_t seed) {
  if (spec.channels < 1 || spec.customers < 1 || spec.members < 1)
    throw ParameterError("random instance: sizes must be positive");
  if (!(spec.density >= 0.0 && spec.density <= 1.0) || !(spec.p_lo >= 0.0 && spec.p_lo <= spec.p_hi && spec.p_hi <= 1.0))
    throw ParameterError("random instance: probabilities out of range");
  if (spec.w_lo_min < 0.0 || spec.w_lo_max < spec.w_lo_min || spec.width_max < 0.0)
    throw ParameterError("random instance: bad weight ranges");

  BudgetProblem out;
  auto& inst = out.instance;
  inst.channels = spec.channels;
  inst.customers = spec.customers;
  inst.budget = spec.budget;
  Rng links_rng(derive_seed(seed, 1));
  for (int u = 0; u < spec.channels; ++u)
    for (int v = 0; v < spec.customers; ++v)
      if (links_rng.bernoulli(spec.density))
        inst.links.push_back({u, v, spec.p_lo + (spec.p_hi - spec.p_lo) * links_rng.uniform()});

  Rng w_rng(derive_seed(seed, 2));
  auto& unc = out.uncertainty;
  unc.lo.resize(spec.customers);
  unc.hi.resize(spec.customers);
  for (int v = 0; v < spec.customers; ++v) {
    unc.lo[v] = spec.w_lo_min + (spec.w_lo_max - spec.w_lo_min) * w_rng.uniform();
    unc.hi[v] = unc.lo[v] + spec.width_max * w_rng.uniform();
  }
  const int vertices = (spec.members + 1) / 2;
  for (int j = 0; j < spec.members; ++j) {
    VectorXd w(spec.customers);
    for (int v = 0; v < spec.customers; ++v) {
      const double u = w_rng.uniform();
      w[v] = j < vertices ? (u < 0.5 ? unc.lo[v] : unc.hi[v]) : unc.lo[v] + u * (unc.hi[v] - unc.lo[v]);
    }
    unc.weights.push_back(std::move(w));
  }
  return out;
}

BudgetProblem make_adversarial_instance(int groups, int channels_per_group,
                                        int customers_per_group, int budget, double p,
                                        std::uint64_t seed) {
  if (groups < 1 || channels_per_group < 1 || customers_per_group < 1)
    throw ParameterError("adversarial instance: sizes must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("adversarial instance: p must be in (0,1]");
  BudgetProblem out;
  auto& inst = out.instance;
  inst.channels = groups * channels_per_group;
  inst.customers = groups * customers_per_group;
  inst.budget = budget;
  Rng rng(seed);
  for (int g = 0; g < groups; ++g) {
    for (int t = 0; t < channels_per_group; ++t) {
      const int u = g * channels_per_group + t;
      bool linked = false;
      for (int c = 0; c < customers_per_group; ++c) {
        const bool last = c + 1 == customers_per_group;
        if (rng.bernoulli(0.6) || (last && !linked)) {
          inst.links.push_back({u, g * customers_per_group + c, p * (0.5 + 0.5 * rng.uniform())});
          linked = true;
        }
      }
    }
  }
  auto& unc = out.uncertainty;
  for (int j = 0; j < groups; ++j) {
    VectorXd w = VectorXd::Zero(inst.customers);
    w.segment(j * customers_per_group, customers_per_group).setOnes();
    unc.weights.push_back(std::move(w));
  }
  unc.lo = VectorXd::Zero(inst.customers);
  unc.hi = VectorXd::Ones(inst.customers);
  return out;
}

BudgetBri::BudgetBri(const BudgetAllocInstance& inst, const ProfitUncertaintySet& u) {
  if (u.weights.empty()) throw ParameterError("budget bri: empty family");
  base_ = budget_objective(inst, VectorXd::Ones(inst.customers));
  weights_.resize(static_cast<Eigen::Index>(u.weights.size()), inst.customers);
  for (std::size_t j = 0; j < u.weights.size(); ++j) {
    auto member = budget_objective(inst, u.weights[j]);
    bound_ = std::max(bound_, member->singleton_bound());
    weights_.row(static_cast<Eigen::Index>(j)) = u.weights[j].transpose();
    members_.push_back(std::move(member));
  }
}

BriResponse BudgetBri::respond(const VectorXd& x, std::uint64_t) const {
  const VectorXd values = weights_ * base_->reach_probability(x);
  Eigen::Index best = 0;
  values.minCoeff(&best);
  return {members_[static_cast<std::size_t>(best)], static_cast<int>(best)};
}

BudgetProblem budget_problem_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("budget instance JSON: ") + e.what());
  }
  auto vec = [](const nlohmann::json& a) {
    VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
  };
  try {
    BudgetProblem out;
    auto& inst = out.instance;
    inst.channels = j.at("channels").get<int>();
    inst.customers = j.at("customers").get<int>();
    inst.budget = j.at("budget").get<int>();
    for (const auto& l : j.at("links"))
      inst.links.push_back({l.at(0).get<int>(), l.at(1).get<int>(), l.at(2).get<double>()});
    for (const auto& w : j.at("weights")) out.uncertainty.weights.push_back(vec(w));
    if (j.contains("lo")) out.uncertainty.lo = vec(j["lo"]);
    if (j.contains("hi")) out.uncertainty.hi = vec(j["hi"]);
    inst.validate();
    for (const auto& w : out.uncertainty.weights)
      if (w.size() != inst.customers || (w.array() < 0.0).any())
        throw InputError("budget instance JSON: bad weight vector");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("budget instance JSON: ") + e.what());
  }
}

std::string budget_problem_to_json(const BudgetProblem& problem) {
  auto arr = [](const VectorXd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
  };
  nlohmann::json j;
  const auto& inst = problem.instance;
  j["channels"] = inst.channels;
  j["customers"] = inst.customers;
  j["budget"] = inst.budget;
  j["links"] = nlohmann::json::array();
  for (const auto& l : inst.links) j["links"].push_back({l.item, l.target, l.prob});
  j["weights"] = nlohmann::json::array();
  for (const auto& w : problem.uncertainty.weights) j["weights"].push_back(arr(w));
  if (problem.uncertainty.lo.size() > 0) j["lo"] = arr(problem.uncertainty.lo);
  if (problem.uncertainty.hi.size() > 0) j["hi"] = arr(problem.uncertainty.hi);
  return j.dump();
}

// ---------------------------------------------------------------------------

InfluenceObjective::InfluenceObjective(std::shared_ptr<const Graph> g, EdgeParams p, int horizon,
                                       std::size_t samples, Mode mode)
    : graph_(std::move(g)), params_(std::move(p)), horizon_(horizon), samples_(samples), mode_(mode) {
  if (!graph_) throw ParameterError("influence objective: null graph");
  params_.validate(*graph_);
  if (horizon < 1) throw ParameterError("influence objective: horizon must be >= 1");
  if (samples < 1 && mode_ == Mode::estimate) throw ParameterError("influence objective: samples must be >= 1");
  if (mode_ == Mode::exact && !exact_capable())
    throw SizeError("influence objective: exact mode exceeds the enumeration cap");
}

bool InfluenceObjective::exact_capable() const {
  return static_cast<long long>(graph_->num_edges()) * horizon_ <= kExactSpreadCap;
}

double InfluenceObjective::value(ItemSpan s, SampleSpec spec) const {
  if (s.empty()) return 0.0;
  if (mode_ == Mode::exact)
    return exact_spread(*graph_, params_, CascadeConfig::single(ItemSet(s.begin(), s.end()), horizon_));
  SpreadSampler sampler(*graph_, params_, horizon_, samples_for(spec), spec.seed);
  return sampler.mean(s);
}

std::optional<double> InfluenceObjective::exact_value(ItemSpan s) const {
  if (!exact_capable()) return std::nullopt;
  if (s.empty()) return 0.0;
  return exact_spread(*graph_, params_, CascadeConfig::single(ItemSet(s.begin(), s.end()), horizon_));
}

VectorXd InfluenceObjective::marginals(ItemSpan s, SampleSpec spec) const {
  if (mode_ == Mode::exact) return SetObjective::marginals(s, spec);
  SpreadSampler sampler(*graph_, params_, horizon_, samples_for(spec), spec.seed);
  const auto state = sampler.state_for(s);
  const double count = static_cast<double>(sampler.samples());
  VectorXd out(ground_size());
  for (int i = 0; i < ground_size(); ++i) {
    if (contains(s, i)) {
      out[i] = static_cast<double>(state.total() - sampler.total_activated(without_item(s, i))) / count;
    } else {
      out[i] = static_cast<double>(sampler.gain(state, i)) / count;
    }
  }
  return out;
}

namespace {

class SamplerEvaluator final : public IncrementalEvaluator {
 public:
  SamplerEvaluator(const Graph& g, const EdgeParams& p, int horizon, std::size_t samples,
                   std::uint64_t seed)
      : sampler_(g, p, horizon, samples, seed), state_(sampler_.empty_state()) {}
  double gain(int item) const override {
    return static_cast<double>(sampler_.gain(state_, item)) / static_cast<double>(sampler_.samples());
  }
  void add(int item) override { sampler_.add(state_, item); }
  const ItemSet& current() const override { return state_.seeds(); }

 private:
  SpreadSampler sampler_;
  SpreadSampler::State state_;
};

}  // namespace

std::unique_ptr<IncrementalEvaluator> InfluenceObjective::incremental(SampleSpec spec) const {
  if (mode_ == Mode::exact) return SetObjective::incremental(spec);
  return std::make_unique<SamplerEvaluator>(*graph_, params_, horizon_, samples_for(spec), spec.seed);
}

std::shared_ptr<const InfluenceObjective> influence_set_objective(std::shared_ptr<const Graph> g,
                                                                  EdgeParams p, int horizon,
                                                                  std::size_t samples,
                                                                  InfluenceObjective::Mode mode) {
  return std::make_shared<const InfluenceObjective>(std::move(g), std::move(p), horizon, samples, mode);
}

}  // namespace robsub
