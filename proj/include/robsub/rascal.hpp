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

#include <functional>
#include <memory>

#include "robsub/cvar.hpp"
#include "robsub/matroid.hpp"
#include "robsub/set_objective.hpp"
#include "robsub/swap_rounding.hpp"

namespace robsub {

using Scenario = VectorXd;

struct SmoothnessParams {
  double L1 = 1.0;  // Lipschitz constant of F
  double L2 = 1.0;  // Lipschitz constant of grad F
  double G = 1.0;   // gradient norm bound
  double M = 1.0;   // value bound

  void validate() const;
};

// F(x, y) >= 0 with F(0, y) = 0, monotone and DR-submodular in x for every
// scenario y.
class StochasticObjective {
 public:
  virtual ~StochasticObjective() = default;
  virtual int dimension() const = 0;
  virtual double value(const VectorXd& x, const Scenario& y) const = 0;
  virtual VectorXd gradient(const VectorXd& x, const Scenario& y) const = 0;
  virtual Scenario sample_scenario(Rng& rng) const = 0;
  virtual SmoothnessParams smoothness() const = 0;
  // Per-coordinate upper end of the domain box [0, u].
  virtual VectorXd domain_upper() const = 0;
};

// Checks F(0, y) = 0, monotonicity and nonpositive cross second differences
// at `points` random (x, y) pairs in the domain box. Throws InputError.
void check_stochastic_objective(const StochasticObjective& obj, std::size_t points,
                                std::uint64_t seed, double tol = 1e-6);

// Finite scenario list with probabilities; the scenario vector y holds the
// index. Sampling draws an index; ScenarioSet::exact lists the full distribution.
class ScenarioMixtureObjective : public StochasticObjective {
 public:
  using ValueFn = std::function<double(const VectorXd&)>;
  using GradFn = std::function<VectorXd(const VectorXd&)>;
  struct Member {
    ValueFn value;
    GradFn gradient;
  };

  ScenarioMixtureObjective(std::vector<Member> members, VectorXd probs, VectorXd domain_upper,
                           SmoothnessParams smoothness);

  int dimension() const override { return static_cast<int>(upper_.size()); }
  double value(const VectorXd& x, const Scenario& y) const override;
  VectorXd gradient(const VectorXd& x, const Scenario& y) const override;
  Scenario sample_scenario(Rng& rng) const override;
  SmoothnessParams smoothness() const override { return smoothness_; }
  VectorXd domain_upper() const override { return upper_; }

  int num_scenarios() const { return static_cast<int>(members_.size()); }
  const VectorXd& probabilities() const { return probs_; }

 private:
  const Member& member(const Scenario& y) const;

  std::vector<Member> members_;
  VectorXd probs_;
  VectorXd upper_;
  SmoothnessParams smoothness_;
};

// F(x, y) = sum_i a_i(y) (1 - exp(-b_i(y) x_i)): separable concave, hence
// DR-submodular. Each scenario lists (a, b).
std::shared_ptr<ScenarioMixtureObjective> separable_exponential(
    const std::vector<std::pair<VectorXd, VectorXd>>& scenarios, VectorXd probs,
    const VectorXd& box_upper);

// F(x, y) = w(y) . x with nonnegative scenario weights.
std::shared_ptr<ScenarioMixtureObjective> scenario_modular(const std::vector<VectorXd>& weights,
                                                           VectorXd probs,
                                                           const VectorXd& box_upper);

// Weighted empirical collection of scenario draws.
struct ScenarioSet {
  std::vector<Scenario> draws;
  std::vector<double> weights;

  static ScenarioSet sample(const StochasticObjective& obj, std::size_t count, std::uint64_t seed);
  // Every scenario of a finite mixture with its probability.
  static ScenarioSet exact(const ScenarioMixtureObjective& obj);
  std::size_t size() const { return draws.size(); }
};

std::vector<double> scenario_values(const StochasticObjective& obj, const VectorXd& x,
                                    const ScenarioSet& scenarios);

double var_alpha(const StochasticObjective& obj, const VectorXd& x, const ScenarioSet& scenarios,
                 double alpha);
double cvar_alpha(const StochasticObjective& obj, const VectorXd& x, const ScenarioSet& scenarios,
                  double alpha);
double h_objective(const StochasticObjective& obj, const VectorXd& x, double tau,
                   const ScenarioSet& scenarios, double alpha);
double smooth_tau(const StochasticObjective& obj, const VectorXd& x, const ScenarioSet& scenarios,
                  double alpha, double u);

// (1/alpha) * weighted mean of slope(tau - F(x, y)) * grad F(x, y): the
// gradient of H_u in x.
VectorXd smooth_grad(const StochasticObjective& obj, const VectorXd& x, double tau,
                     const ScenarioSet& batch, double alpha, double u);

// Down-closed polytope given by linear optimization and membership.
class Polytope {
 public:
  virtual ~Polytope() = default;
  virtual int dimension() const = 0;
  // Vertex maximizing g . v.
  virtual VectorXd linear_opt(const VectorXd& g) const = 0;
  virtual bool contains(const VectorXd& x, double tol = 1e-9) const = 0;
  virtual double diameter() const = 0;
};

class BoxPolytope final : public Polytope {
 public:
  explicit BoxPolytope(VectorXd upper);
  int dimension() const override { return static_cast<int>(upper_.size()); }
  VectorXd linear_opt(const VectorXd& g) const override;
  bool contains(const VectorXd& x, double tol = 1e-9) const override;
  double diameter() const override { return upper_.norm(); }

 private:
  VectorXd upper_;
};

// { x >= 0, sum x <= budget }.
class BudgetPolytope final : public Polytope {
 public:
  BudgetPolytope(int n, double budget);
  int dimension() const override { return n_; }
  VectorXd linear_opt(const VectorXd& g) const override;
  bool contains(const VectorXd& x, double tol = 1e-9) const override;
  double diameter() const override { return budget_ * std::sqrt(2.0); }

 private:
  int n_;
  double budget_;
};

// Matroid polytope; linear optimization by matroid greedy.
class MatroidPolytope final : public Polytope {
 public:
  explicit MatroidPolytope(Constraint c) : c_(std::move(c)) {}
  int dimension() const override { return c_.ground_size(); }
  VectorXd linear_opt(const VectorXd& g) const override;
  bool contains(const VectorXd& x, double tol = 1e-9) const override;
  double diameter() const override { return std::sqrt(static_cast<double>(c_.rank())); }
  const Constraint& constraint() const { return c_; }

 private:
  Constraint c_;
};

struct CvarConfig {
  double alpha = 0.1;
  double epsilon = 0.01;
  double delta = 0.05;
  int iterations = 100;
  std::size_t scenario_samples = 1000;
  double smoothing_width = 0.0;  // 0: epsilon * alpha / L1

  void validate() const;
  double width_for(const SmoothnessParams& s) const;
};

struct RascalTraceRow {
  int iteration = 0;
  double tau = 0.0;
  double cvar_estimate = 0.0;
  double elapsed_ms = 0.0;  // since the start of the run
};

struct RascalResult {
  VectorXd x;
  std::vector<VectorXd> vertices;  // one per iteration, weight 1/iterations
  std::vector<RascalTraceRow> trace;
};

// Frank-Wolfe on H_u with tau re-optimized each step: tau <- smooth_tau(x),
// g <- smooth_grad(x, tau), v <- P.linear_opt(g), x <- x + v / iterations.
// Scenario batches are drawn fresh per iteration unless `fixed` is given.
RascalResult rascal_solve(const StochasticObjective& obj, const Polytope& p, const CvarConfig& cfg,
                          std::uint64_t seed, const ScenarioSet* fixed = nullptr);

// Same loop maximizing E[F] (gradient = mean of grad F); the alpha = 1 reference.
RascalResult expectation_frank_wolfe(const StochasticObjective& obj, const Polytope& p,
                                     const CvarConfig& cfg, std::uint64_t seed,
                                     const ScenarioSet* fixed = nullptr);

// Discrete portfolio problem: scenario j (probability probs[j]) scores a set
// with members[j]. The continuous instance uses multilinear extensions (closed
// form where available, else `samples` common draws) over the matroid polytope.
struct PortfolioProblem {
  std::shared_ptr<ScenarioMixtureObjective> objective;
  std::shared_ptr<MatroidPolytope> polytope;
  std::vector<ObjectivePtr> members;
  VectorXd probs;
};

PortfolioProblem portfolio_reduction(std::vector<ObjectivePtr> members, VectorXd probs,
                                     const Constraint& c, std::size_t samples = 2000,
                                     std::uint64_t seed = 0);

// Portfolio from a solution: uniform over `count` swap roundings of the
// Frank-Wolfe vertices.
MixedStrategy portfolio_from_solution(const RascalResult& result, const Constraint& c,
                                      std::size_t count, std::uint64_t seed);

// CVaR over scenarios of each scenario's expected value under the portfolio.
double portfolio_cvar(const MixedStrategy& portfolio, const PortfolioProblem& problem, double alpha);

}  // namespace robsub
