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

#include "robsub/rascal.hpp"

#include <chrono>
#include <cmath>

#include "robsub/multilinear.hpp"

namespace robsub {

void SmoothnessParams::validate() const {
  if (!(L1 > 0.0 && L2 > 0.0 && G > 0.0 && M > 0.0))
    throw ParameterError("smoothness constants must be positive");
}

void check_stochastic_objective(const StochasticObjective& obj, std::size_t points,
                                std::uint64_t seed, double tol) {
  const int n = obj.dimension();
  const VectorXd upper = obj.domain_upper();
  Rng rng(seed);
  auto random_point = [&] {
    VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = upper[i] * rng.uniform();
    return x;
  };
  for (std::size_t k = 0; k < points; ++k) {
    const Scenario y = obj.sample_scenario(rng);
    if (std::abs(obj.value(VectorXd::Zero(n), y)) > tol) throw InputError("objective: F(0, y) != 0");
    const VectorXd x = random_point();
    const VectorXd z = random_point();
    const VectorXd hi = x.cwiseMax(z);
    const VectorXd lo = x.cwiseMin(z);
    if (obj.value(hi, y) < obj.value(lo, y) - tol) throw InputError("objective: not monotone");
    // Cross difference along coordinates i != j with steps a, b.
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double a = 0.5 * (upper[i] - x[i]) * rng.uniform();
        const double b = 0.5 * (upper[j] - x[j]) * rng.uniform();
        VectorXd xi = x, xj = x, xij = x;
        xi[i] += a;
        xj[j] += b;
        xij[i] += a;
        xij[j] += b;
        const double cross = obj.value(xij, y) - obj.value(xi, y) - obj.value(xj, y) + obj.value(x, y);
        if (cross > tol) throw InputError("objective: not DR-submodular");
      }
    }
  }
}

ScenarioMixtureObjective::ScenarioMixtureObjective(std::vector<Member> members, VectorXd probs,
                                                   VectorXd domain_upper,
                                                   SmoothnessParams smoothness)
    : members_(std::move(members)),
      probs_(std::move(probs)),
      upper_(std::move(domain_upper)),
      smoothness_(smoothness) {
  if (members_.empty()) throw InputError("scenario mixture: no scenarios");
  if (probs_.size() != static_cast<Eigen::Index>(members_.size()))
    throw InputError("scenario mixture: one probability per scenario required");
  if ((probs_.array() < 0.0).any() || std::abs(probs_.sum() - 1.0) > 1e-9)
    throw InputError("scenario mixture: probabilities must be a distribution");
  if ((upper_.array() <= 0.0).any()) throw InputError("scenario mixture: domain must be a nonempty box");
  smoothness_.validate();
}

const ScenarioMixtureObjective::Member& ScenarioMixtureObjective::member(const Scenario& y) const {
  if (y.size() != 1) throw InputError("scenario mixture: scenario must be an index");
  const auto j = static_cast<long long>(y[0]);
  if (j < 0 || j >= static_cast<long long>(members_.size())) throw InputError("scenario mixture: index out of range");
  return members_[static_cast<std::size_t>(j)];
}

double ScenarioMixtureObjective::value(const VectorXd& x, const Scenario& y) const {
  return member(y).value(x);
}

VectorXd ScenarioMixtureObjective::gradient(const VectorXd& x, const Scenario& y) const {
  return member(y).gradient(x);
}

Scenario ScenarioMixtureObjective::sample_scenario(Rng& rng) const {
  const double r = rng.uniform();
  double cumulative = 0.0;
  Eigen::Index j = 0;
  for (; j + 1 < probs_.size(); ++j) {
    cumulative += probs_[j];
    if (r < cumulative) break;
  }
  return VectorXd::Constant(1, static_cast<double>(j));
}

std::shared_ptr<ScenarioMixtureObjective> separable_exponential(
    const std::vector<std::pair<VectorXd, VectorXd>>& scenarios, VectorXd probs,
    const VectorXd& box_upper) {
  std::vector<ScenarioMixtureObjective::Member> members;
  SmoothnessParams s{0.0, 0.0, 0.0, 0.0};
  for (const auto& [a, b] : scenarios) {
    if (a.size() != box_upper.size() || b.size() != box_upper.size())
      throw InputError("separable objective: dimension mismatch");
    if ((a.array() < 0.0).any() || (b.array() < 0.0).any())
      throw InputError("separable objective: coefficients must be nonnegative");
    members.push_back({[a, b](const VectorXd& x) {
                         return (a.array() * (1.0 - (-b.array() * x.array()).exp())).sum();
                       },
                       [a, b](const VectorXd& x) -> VectorXd {
                         return a.array() * b.array() * (-b.array() * x.array()).exp();
                       }});
    const VectorXd slope = a.cwiseProduct(b);
    s.L1 = std::max(s.L1, slope.norm());
    s.L2 = std::max(s.L2, slope.cwiseProduct(b).maxCoeff());
    s.M = std::max(s.M, (a.array() * (1.0 - (-b.array() * box_upper.array()).exp())).sum());
  }
  s.G = s.L1;
  // Degenerate all-zero scenarios still need positive constants.
  s.L1 = std::max(s.L1, 1e-12);
  s.L2 = std::max(s.L2, 1e-12);
  s.G = std::max(s.G, 1e-12);
  s.M = std::max(s.M, 1e-12);
  return std::make_shared<ScenarioMixtureObjective>(std::move(members), std::move(probs), box_upper, s);
}

std::shared_ptr<ScenarioMixtureObjective> scenario_modular(const std::vector<VectorXd>& weights,
                                                           VectorXd probs,
                                                           const VectorXd& box_upper) {
  std::vector<ScenarioMixtureObjective::Member> members;
  SmoothnessParams s{1e-12, 1e-12, 1e-12, 1e-12};  // L2 stays tiny: the gradient is constant
  for (const auto& w : weights) {
    if (w.size() != box_upper.size()) throw InputError("modular objective: dimension mismatch");
    if ((w.array() < 0.0).any()) throw InputError("modular objective: weights must be nonnegative");
    members.push_back({[w](const VectorXd& x) { return w.dot(x); },
                       [w](const VectorXd&) -> VectorXd { return w; }});
    s.L1 = std::max(s.L1, w.norm());
    s.M = std::max(s.M, w.dot(box_upper));
  }
  s.G = s.L1;
  return std::make_shared<ScenarioMixtureObjective>(std::move(members), std::move(probs), box_upper, s);
}

ScenarioSet ScenarioSet::sample(const StochasticObjective& obj, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw ParameterError("scenario sample count must be positive");
  ScenarioSet out;
  out.draws.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Rng rng(derive_seed(seed, k));
    out.draws.push_back(obj.sample_scenario(rng));
  }
  out.weights.assign(count, 1.0);
  return out;
}

ScenarioSet ScenarioSet::exact(const ScenarioMixtureObjective& obj) {
  ScenarioSet out;
  for (int j = 0; j < obj.num_scenarios(); ++j) {
    out.draws.push_back(VectorXd::Constant(1, static_cast<double>(j)));
    out.weights.push_back(obj.probabilities()[j]);
  }
  return out;
}

std::vector<double> scenario_values(const StochasticObjective& obj, const VectorXd& x,
                                    const ScenarioSet& scenarios) {
  if (scenarios.size() == 0) throw InputError("empty scenario set");
  if (x.size() != obj.dimension()) throw InputError("point dimension mismatch");
  std::vector<double> values(scenarios.size());
  parallel_for(values.size(), [&](std::size_t k) { values[k] = obj.value(x, scenarios.draws[k]); });
  return values;
}

double var_alpha(const StochasticObjective& obj, const VectorXd& x, const ScenarioSet& scenarios,
                 double alpha) {
  check_alpha(alpha);
  return var_alpha(scenario_values(obj, x, scenarios), scenarios.weights, alpha);
}

double cvar_alpha(const StochasticObjective& obj, const VectorXd& x, const ScenarioSet& scenarios,
                  double alpha) {
  check_alpha(alpha);
  return cvar_alpha(scenario_values(obj, x, scenarios), scenarios.weights, alpha);
}

double h_objective(const StochasticObjective& obj, const VectorXd& x, double tau,
                   const ScenarioSet& scenarios, double alpha) {
  check_alpha(alpha);
  return h_objective(scenario_values(obj, x, scenarios), scenarios.weights, alpha, tau);
}

double smooth_tau(const StochasticObjective& obj, const VectorXd& x, const ScenarioSet& scenarios,
                  double alpha, double u) {
  check_alpha(alpha);
  return smooth_tau(scenario_values(obj, x, scenarios), scenarios.weights, alpha, u, obj.smoothness().M);
}

namespace {

double total_weight(const ScenarioSet& batch) {
  const double total = pairwise_sum(batch.weights);
  if (!(total > 0.0)) throw InputError("scenario set has zero total weight");
  return total;
}

}  // namespace

VectorXd smooth_grad(const StochasticObjective& obj, const VectorXd& x, double tau,
                     const ScenarioSet& batch, double alpha, double u) {
  check_alpha(alpha);
  if (!(u > 0.0)) throw ParameterError("smoothing width must be positive");
  if (batch.size() == 0) throw InputError("empty scenario set");
  const double total = total_weight(batch);
  const VectorXd sum = blocked_sum(batch.size(), obj.dimension(), [&](std::size_t k, VectorXd& acc) {
    const double slope = smooth_hinge_slope(tau - obj.value(x, batch.draws[k]), u);
    if (slope > 0.0) acc += (batch.weights[k] * slope) * obj.gradient(x, batch.draws[k]);
  });
  return sum / (alpha * total);
}

BoxPolytope::BoxPolytope(VectorXd upper) : upper_(std::move(upper)) {
  if ((upper_.array() < 0.0).any()) throw InputError("box: negative upper bound");
}

VectorXd BoxPolytope::linear_opt(const VectorXd& g) const {
  if (g.size() != upper_.size()) throw InputError("box: dimension mismatch");
  return (g.array() > 0.0).select(upper_, 0.0);
}

bool BoxPolytope::contains(const VectorXd& x, double tol) const {
  return x.size() == upper_.size() && (x.array() >= -tol).all() && (x.array() <= upper_.array() + tol).all();
}

BudgetPolytope::BudgetPolytope(int n, double budget) : n_(n), budget_(budget) {
  if (n < 1) throw ParameterError("budget polytope: dimension must be positive");
  if (!(budget > 0.0)) throw ParameterError("budget polytope: budget must be positive");
}

VectorXd BudgetPolytope::linear_opt(const VectorXd& g) const {
  if (g.size() != n_) throw InputError("budget polytope: dimension mismatch");
  VectorXd v = VectorXd::Zero(n_);
  Eigen::Index best = 0;
  const double top = g.maxCoeff(&best);  // first maximum
  if (top > 0.0) v[best] = budget_;
  return v;
}

bool BudgetPolytope::contains(const VectorXd& x, double tol) const {
  return x.size() == n_ && (x.array() >= -tol).all() && x.sum() <= budget_ + tol;
}

VectorXd MatroidPolytope::linear_opt(const VectorXd& g) const {
  VectorXd v = VectorXd::Zero(c_.ground_size());
  for (int i : c_.max_weight_independent(g)) v[i] = 1.0;
  return v;
}

bool MatroidPolytope::contains(const VectorXd& x, double tol) const {
  const auto inside = c_.in_polytope(x, tol);
  if (!inside) throw UnsupportedError("matroid polytope: membership test unavailable for this matroid");
  return *inside;
}

void CvarConfig::validate() const {
  check_alpha(alpha);
  if (!(epsilon > 0.0)) throw ParameterError("cvar config: epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("cvar config: delta must lie in (0, 1)");
  if (iterations < 1) throw ParameterError("cvar config: iterations must be positive");
  if (scenario_samples < 1) throw ParameterError("cvar config: scenario_samples must be positive");
  if (!(smoothing_width >= 0.0)) throw ParameterError("cvar config: smoothing_width must be >= 0");
}

double CvarConfig::width_for(const SmoothnessParams& s) const {
  return smoothing_width > 0.0 ? smoothing_width : epsilon * alpha / s.L1;
}

namespace {

enum class FwTarget { cvar, expectation };

RascalResult frank_wolfe(const StochasticObjective& obj, const Polytope& p, const CvarConfig& cfg,
                         std::uint64_t seed, const ScenarioSet* fixed, FwTarget target) {
  cfg.validate();
  const SmoothnessParams s = obj.smoothness();
  s.validate();
  if (p.dimension() != obj.dimension()) throw InputError("polytope and objective dimensions differ");
  const double u = cfg.width_for(s);
  const double step = 1.0 / cfg.iterations;

  const auto start = std::chrono::steady_clock::now();
  RascalResult out;
  out.x = VectorXd::Zero(obj.dimension());
  for (int t = 0; t < cfg.iterations; ++t) {
    ScenarioSet drawn;
    if (!fixed) drawn = ScenarioSet::sample(obj, cfg.scenario_samples, derive_seed(seed, t));
    const ScenarioSet& batch = fixed ? *fixed : drawn;
    const auto values = scenario_values(obj, out.x, batch);

    double tau = 0.0;
    VectorXd g;
    if (target == FwTarget::cvar) {
      tau = smooth_tau(values, batch.weights, cfg.alpha, u, s.M);
      g = smooth_grad(obj, out.x, tau, batch, cfg.alpha, u);
    } else {
      const double total = total_weight(batch);
      g = blocked_sum(batch.size(), obj.dimension(), [&](std::size_t k, VectorXd& acc) {
            acc += batch.weights[k] * obj.gradient(out.x, batch.draws[k]);
          }) / total;
    }
    VectorXd v = p.linear_opt(g);
    out.x += step * v;
    out.vertices.push_back(std::move(v));
    out.trace.push_back({t, tau, cvar_alpha(scenario_values(obj, out.x, batch), batch.weights, cfg.alpha),
                         std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()});
  }
  return out;
}

}  // namespace

RascalResult rascal_solve(const StochasticObjective& obj, const Polytope& p, const CvarConfig& cfg,
                          std::uint64_t seed, const ScenarioSet* fixed) {
  return frank_wolfe(obj, p, cfg, seed, fixed, FwTarget::cvar);
}

RascalResult expectation_frank_wolfe(const StochasticObjective& obj, const Polytope& p,
                                     const CvarConfig& cfg, std::uint64_t seed,
                                     const ScenarioSet* fixed) {
  return frank_wolfe(obj, p, cfg, seed, fixed, FwTarget::expectation);
}

PortfolioProblem portfolio_reduction(std::vector<ObjectivePtr> members, VectorXd probs,
                                     const Constraint& c, std::size_t samples, std::uint64_t seed) {
  if (members.empty()) throw InputError("portfolio: no scenarios");
  const int n = c.ground_size();
  SmoothnessParams s{1e-12, 1e-12, 1e-12, 1e-12};
  std::vector<ScenarioMixtureObjective::Member> continuous;
  ItemSet all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  for (std::size_t j = 0; j < members.size(); ++j) {
    const ObjectivePtr f = members[j];
    if (!f) throw InputError("portfolio: null scenario objective");
    if (f->ground_size() != n) throw InputError("portfolio: ground set mismatch");
    if (!f->monotone()) throw ParameterError("portfolio: scenario objectives must be monotone");
    const std::uint64_t stream = derive_seed(seed, j);
    continuous.push_back({[f, samples, stream](const VectorXd& x) {
                            return multilinear_best(*f, x, samples, stream);
                          },
                          [f, samples, stream](const VectorXd& x) {
                            return multilinear_grad_best(*f, x, samples, stream);
                          }});
    // |dF/dx_i| <= f({i}) by submodularity, and F <= f(N).
    const double single = f->singleton_bound();
    s.L1 = std::max(s.L1, single * std::sqrt(static_cast<double>(n)));
    s.L2 = std::max(s.L2, 2.0 * single * std::sqrt(static_cast<double>(n)));
    s.M = std::max(s.M, exact_or_estimate(*f, all, {samples, stream}));
  }
  s.G = s.L1;
  PortfolioProblem out;
  out.objective = std::make_shared<ScenarioMixtureObjective>(std::move(continuous), probs,
                                                             VectorXd::Ones(n), s);
  out.polytope = std::make_shared<MatroidPolytope>(c);
  out.members = std::move(members);
  out.probs = std::move(probs);
  return out;
}

MixedStrategy portfolio_from_solution(const RascalResult& result, const Constraint& c,
                                      std::size_t count, std::uint64_t seed) {
  if (result.vertices.empty()) throw InputError("portfolio: solution has no vertices");
  if (count == 0) throw ParameterError("portfolio: count must be positive");
  std::vector<WeightedSet> combination;
  const double w = 1.0 / static_cast<double>(result.vertices.size());
  for (const auto& v : result.vertices) {
    ItemSet s;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v[i] > 0.5) s.push_back(static_cast<int>(i));
    combination.push_back({std::move(s), w});
  }
  std::vector<ItemSet> draws(count);
  parallel_for(count, [&](std::size_t r) { draws[r] = swap_round(combination, c, derive_seed(seed, r)); });
  return MixedStrategy::uniform(draws);
}

double portfolio_cvar(const MixedStrategy& portfolio, const PortfolioProblem& problem, double alpha) {
  check_alpha(alpha);
  std::vector<double> values(problem.members.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    double v = 0.0;
    for (const auto& ws : portfolio.support()) v += ws.weight * exact_or_estimate(*problem.members[j], ws.set);
    values[j] = v;
  }
  std::vector<double> weights(problem.probs.data(), problem.probs.data() + problem.probs.size());
  return cvar_alpha(values, weights, alpha);
}

}  // namespace robsub
