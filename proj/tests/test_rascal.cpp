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


#include <doctest.h>

#include <cmath>
#include <memory>

#include "oracles.hpp"
#include "robsub/greedy.hpp"
#include "robsub/rascal.hpp"

using namespace robsub;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

const std::vector<double> kOneThree{1.0, 3.0};
const std::vector<double> kHalfHalf{0.5, 0.5};

// Smoothed objective written directly from its definition.
double h_u_ref(const std::vector<double>& v, const std::vector<double>& w, double alpha, double tau, double u) {
  double total = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = tau - v[i];
    const double h = t <= 0 ? 0.0 : (t <= u ? t * t / (2 * u) : t - u / 2);
    total += w[i] * h;
    mass += w[i];
  }
  return tau - total / (alpha * mass);
}

double h_ref(const std::vector<double>& v, const std::vector<double>& w, double alpha, double tau) {
  double total = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    total += w[i] * std::max(0.0, tau - v[i]);
    mass += w[i];
  }
  return tau - total / (alpha * mass);
}

}  // namespace

TEST_CASE("value at risk examples") {
  CHECK(var_alpha(kOneThree, kHalfHalf, 0.5) == 1.0);
  CHECK(var_alpha(kOneThree, kHalfHalf, 1.0) == 3.0);
  const std::vector<double> one{2.5}, w{1.0};
  for (double a : {0.01, 0.3, 1.0}) CHECK(var_alpha(one, w, a) == 2.5);
  CHECK_THROWS_AS(var_alpha(kOneThree, kHalfHalf, 0.0), ParameterError);
  CHECK_THROWS_AS(var_alpha(kOneThree, kHalfHalf, 1.5), ParameterError);
  CHECK_THROWS_AS(var_alpha(std::vector<double>{}, std::vector<double>{}, 0.5), InputError);
}

TEST_CASE("conditional value at risk examples") {
  CHECK(cvar_alpha(kOneThree, kHalfHalf, 0.5) == doctest::Approx(1.0));
  CHECK(cvar_alpha(kOneThree, kHalfHalf, 1.0) == doctest::Approx(2.0));
  const std::vector<double> one{2.5}, w{1.0};
  for (double a : {0.01, 0.3, 1.0}) CHECK(cvar_alpha(one, w, a) == doctest::Approx(2.5));
}

TEST_CASE("cvar agrees with quantile integration and its invariants") {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(derive_seed(3, trial));
    std::vector<double> v, w;
    double mass = 0.0;
    for (int i = 0; i < 7; ++i) {
      v.push_back(std::floor(rng.uniform() * 5));  // repeated atoms
      w.push_back(0.1 + rng.uniform());
      mass += w.back();
    }
    std::vector<double> probs;
    for (double x : w) probs.push_back(x / mass);
    double prev = -1e300;
    for (double a : {0.05, 0.2, 0.37, 0.5, 0.81, 1.0}) {
      const double c = cvar_alpha(v, w, a);
      CHECK(c == doctest::Approx(oracle::cvar_by_quantile(v, probs, a, 20000)).epsilon(1e-3));
      CHECK(c <= var_alpha(v, w, a) + 1e-12);
      CHECK(c >= prev - 1e-12);
      prev = c;
      // Rockafellar-Uryasev: max over tau equals CVaR
      double best = -1e300;
      for (int g = 0; g <= 10000; ++g) best = std::max(best, h_ref(v, w, a, 5.0 * g / 10000));
      CHECK(best == doctest::Approx(c).epsilon(1e-9));
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) mean += probs[i] * v[i];
    CHECK(cvar_alpha(v, w, 1.0) == doctest::Approx(mean));
  }
}

TEST_CASE("auxiliary objective examples") {
  CHECK(h_objective(kOneThree, kHalfHalf, 0.5, 1.0) == doctest::Approx(1.0));
  CHECK(h_objective(kOneThree, kHalfHalf, 0.5, 3.0) == doctest::Approx(1.0));
  CHECK(h_objective(kOneThree, kHalfHalf, 0.5, 0.0) == 0.0);
  // nonincreasing beyond VaR
  double prev = 1e300;
  for (int g = 0; g <= 100; ++g) {
    const double tau = 1.0 + 4.0 * g / 100;
    const double h = h_objective(kOneThree, kHalfHalf, 0.5, tau);
    CHECK(h <= prev + 1e-12);
    prev = h;
  }
}

TEST_CASE("smoothed tau examples") {
  const std::vector<double> one{2.0}, w{1.0};
  CHECK(std::abs(smooth_tau(one, w, 0.3, 1e-6, 5.0) - 2.0) <= 2e-6);
  const double u = 1e-6;
  const double tau = smooth_tau(kOneThree, kHalfHalf, 0.5, u, 5.0);
  // H_u is flat on [1 + u, 3]; the bisection lands at its left edge
  CHECK(std::abs(tau - 1.0) <= 1.1 * u);
  for (double uu : {0.5, 0.1, 0.01}) {
    for (double a : {0.1, 0.5, 1.0}) {
      const std::vector<double> v{0.3, 1.2, 1.25, 2.0, 4.0};
      const std::vector<double> ww{1, 2, 1, 1, 3};
      const double t = smooth_tau(v, ww, a, uu, 5.0);
      const double ht = h_u_ref(v, ww, a, t, uu);
      CHECK(h_smooth(v, ww, a, t, uu) == doctest::Approx(ht).epsilon(1e-12));
      for (int g = 0; g <= 10000; ++g) CHECK(ht >= h_u_ref(v, ww, a, 5.0 * g / 10000, uu) - uu / 10);
    }
  }
}

TEST_CASE("smoothed gradient limits") {
  const auto obj = separable_exponential({{vec({1, 2}), vec({1, 0.5})}, {vec({2, 1}), vec({0.5, 1})}}, vec({0.5, 0.5}),
                                         vec({1, 1}));
  const auto sc = ScenarioSet::exact(*obj);
  const VectorXd x = vec({0.4, 0.7});
  CHECK(smooth_grad(*obj, x, 0.0, sc, 0.3, 0.01).norm() == 0.0);
  const VectorXd mean_grad = 0.5 * obj->gradient(x, sc.draws[0]) + 0.5 * obj->gradient(x, sc.draws[1]);
  CHECK((smooth_grad(*obj, x, 5.0, sc, 0.3, 0.01) - mean_grad / 0.3).norm() < 1e-12);
}

TEST_CASE("smoothed gradient matches finite differences") {
  const auto obj = separable_exponential(
      {{vec({1, 2}), vec({1, 0.5})}, {vec({2, 1}), vec({0.5, 1})}, {vec({1.5, 1.5}), vec({2, 2})}},
      vec({0.3, 0.3, 0.4}), vec({1, 1}));
  const auto batch = ScenarioSet::sample(*obj, 100000, 5);
  const double alpha = 0.4, u = 0.2;
  const VectorXd x = vec({0.5, 0.3});
  const auto vals = scenario_values(*obj, x, batch);
  const double tau = var_alpha(vals, batch.weights, alpha) + 0.05;
  const VectorXd g = smooth_grad(*obj, x, tau, batch, alpha, u);
  for (int i = 0; i < 2; ++i) {
    VectorXd up = x, down = x;
    up[i] += 1e-4;
    down[i] -= 1e-4;
    const double fd = (h_u_ref(scenario_values(*obj, up, batch), batch.weights, alpha, tau, u) -
                       h_u_ref(scenario_values(*obj, down, batch), batch.weights, alpha, tau, u)) / 2e-4;
    CHECK(std::abs(g[i] - fd) <= 1e-2 * std::abs(fd));
  }
}

TEST_CASE("smoothing bias vanishes with the width") {
  const auto obj = separable_exponential({{vec({1, 2}), vec({1, 0.5})}, {vec({2, 1}), vec({0.5, 1})}}, vec({0.5, 0.5}),
                                         vec({1, 1}));
  const auto sc = ScenarioSet::exact(*obj);
  const VectorXd x = vec({0.4, 0.7});
  const auto vals = scenario_values(*obj, x, sc);
  const double tau = 0.5 * (vals[0] + vals[1]);  // between the two values, away from kinks
  const double alpha = 0.5;
  VectorXd sub = VectorXd::Zero(2);
  for (std::size_t i = 0; i < 2; ++i)
    if (vals[i] < tau) sub += sc.weights[i] * obj->gradient(x, sc.draws[i]);
  sub /= alpha;
  double prev = 1e300;
  for (double u : {1e-1, 1e-2, 1e-3}) {
    const double err = (smooth_grad(*obj, x, tau, sc, alpha, u) - sub).norm();
    CHECK(err <= prev + 1e-15);
    prev = err;
  }
  CHECK(prev < 1e-9);
}

TEST_CASE("objective checks") {
  const auto obj = separable_exponential({{vec({1, 2}), vec({1, 0.5})}}, vec({1.0}), vec({2, 2}));
  CHECK_NOTHROW(check_stochastic_objective(*obj, 50, 1));
  const ScenarioMixtureObjective bad({{[](const VectorXd& x) { return 1.0 + x.sum(); },
                                       [](const VectorXd& x) { return VectorXd::Ones(x.size()).eval(); }}},
                                     vec({1.0}), vec({1, 1}), {});
  CHECK_THROWS(check_stochastic_objective(bad, 10, 1));
  const ScenarioMixtureObjective convex({{[](const VectorXd& x) { return x[0] * x[1]; },
                                          [](const VectorXd& x) { return vec({x[1], x[0]}); }}},
                                        vec({1.0}), vec({1, 1}), {});
  CHECK_THROWS(check_stochastic_objective(convex, 10, 1));
  CHECK_THROWS(SmoothnessParams{0.0, 1, 1, 1}.validate());
}

TEST_CASE("polytopes") {
  const BoxPolytope box(vec({1, 2}));
  CHECK((box.linear_opt(vec({1, -1})) - vec({1, 0})).norm() == 0.0);
  CHECK(box.contains(vec({0.5, 2})));
  CHECK_FALSE(box.contains(vec({0.5, 2.1})));
  const BudgetPolytope simplex(3, 2.0);
  CHECK((simplex.linear_opt(vec({0.1, 0.5, 0.5})) - vec({0, 2, 0})).norm() == 0.0);
  CHECK(simplex.linear_opt(vec({-1, -1, -1})).norm() == 0.0);
  CHECK_FALSE(simplex.contains(vec({1, 1, 0.5})));
  const MatroidPolytope mp(Constraint::cardinality(3, 1));
  CHECK((mp.linear_opt(vec({0.2, 0.9, 0.1})) - vec({0, 1, 0})).norm() == 0.0);
  CHECK(mp.contains(vec({0.3, 0.3, 0.3})));
}

TEST_CASE("rascal on a deterministic modular objective") {
  const auto obj = scenario_modular({vec({1, 2})}, vec({1.0}), vec({1, 1}));
  const BoxPolytope box(vec({1, 1}));
  CvarConfig cfg;
  cfg.iterations = 50;
  cfg.scenario_samples = 10;
  const auto r = rascal_solve(*obj, box, cfg, 1);
  CHECK((r.x - vec({1, 1})).norm() < 1e-9);
  const auto sc = ScenarioSet::exact(*obj);
  CHECK(cvar_alpha(*obj, r.x, sc, cfg.alpha) >= 3.0 - cfg.epsilon);
  for (double a : {0.1, 0.7, 1.0}) CHECK(cvar_alpha(*obj, r.x, sc, a) == doctest::Approx(3.0));
  REQUIRE(r.trace.size() == 50);
  CHECK(r.trace.back().cvar_estimate == doctest::Approx(3.0));
}

TEST_CASE("rascal on the budget simplex") {
  const auto obj = separable_exponential({{vec({1, 1}), vec({1, 1})}}, vec({1.0}), vec({1, 1}));
  const BudgetPolytope simplex(2, 1.0);
  CvarConfig cfg;
  cfg.iterations = 100;
  cfg.scenario_samples = 10;
  const auto r = rascal_solve(*obj, simplex, cfg, 3);
  CHECK(simplex.contains(r.x));
  double best = 0.0;
  for (int g = 0; g <= 10000; ++g) {
    const double a = g / 10000.0;
    best = std::max(best, (1 - std::exp(-a)) + (1 - std::exp(-(1 - a))));
  }
  const auto sc = ScenarioSet::exact(*obj);
  CHECK(cvar_alpha(*obj, r.x, sc, cfg.alpha) >= (1 - std::exp(-1.0)) * best - 0.02);
}

TEST_CASE("rascal hedges between two scenarios") {
  // scenario k pays nothing on coordinate k
  const auto obj = scenario_modular({vec({0, 1}), vec({1, 0})}, vec({0.5, 0.5}), vec({1, 1}));
  const BudgetPolytope simplex(2, 1.0);
  CvarConfig cfg;
  cfg.alpha = 0.5;
  cfg.iterations = 200;
  cfg.smoothing_width = 0.01;
  const auto sc = ScenarioSet::exact(*obj);
  const auto r = rascal_solve(*obj, simplex, cfg, 4, &sc);
  double best = 0.0;
  for (int g = 0; g <= 100; ++g)
    for (int h = 0; g + h <= 100; ++h) best = std::max(best, cvar_alpha(*obj, vec({g / 100.0, h / 100.0}), sc, 0.5));
  CHECK(best == doctest::Approx(0.5));
  CHECK(cvar_alpha(*obj, r.x, sc, 0.5) >= (1 - std::exp(-1.0)) * best);
  CHECK(std::abs(r.x[0] - r.x[1]) < 0.2);
  CHECK(simplex.contains(r.x));
}

TEST_CASE("rascal iterates stay feasible and grow") {
  const auto obj = separable_exponential({{vec({1, 2, 1}), vec({1, 0.5, 2})}, {vec({2, 1, 0.5}), vec({0.5, 1, 1})}},
                                         vec({0.5, 0.5}), vec({1, 1, 1}));
  const BudgetPolytope simplex(3, 1.5);
  CvarConfig cfg;
  cfg.iterations = 30;
  cfg.scenario_samples = 200;
  const auto r = rascal_solve(*obj, simplex, cfg, 2);
  VectorXd x = VectorXd::Zero(3);
  for (const auto& v : r.vertices) {
    CHECK((v.array() >= 0.0).all());
    x += v / cfg.iterations;
    CHECK(simplex.contains(x));
  }
  CHECK((x - r.x).norm() < 1e-12);
  // deterministic in the seed
  CHECK((rascal_solve(*obj, simplex, cfg, 2).x - r.x).norm() == 0.0);
}

TEST_CASE("config validation") {
  CvarConfig cfg;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.alpha = 1.0;
  CHECK_NOTHROW(cfg.validate());
  cfg.iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  CvarConfig d;
  CHECK(d.width_for({2.0, 1, 1, 1}) == doctest::Approx(0.01 * 0.1 / 2.0));
}

TEST_CASE("single scenario portfolio recovers a good set") {
  Rng rng(12);
  std::vector<std::vector<int>> sets(8);
  std::vector<double> w;
  for (int t = 0; t < 10; ++t) w.push_back(0.5 + rng.uniform());
  for (auto& s : sets)
    for (int t = 0; t < 10; ++t)
      if (rng.bernoulli(0.3)) s.push_back(t);
  const auto f = std::make_shared<ProbabilisticCoverage>(
      ProbabilisticCoverage::coverage(sets, Eigen::Map<VectorXd>(w.data(), 10)));
  const Constraint c = Constraint::cardinality(8, 2);
  const auto problem = portfolio_reduction({f}, vec({1.0}), c, 500, 1);
  CvarConfig cfg;
  cfg.alpha = 1.0;
  cfg.iterations = 40;
  cfg.scenario_samples = 1;
  const auto r = rascal_solve(*problem.objective, *problem.polytope, cfg, 2);
  const auto portfolio = portfolio_from_solution(r, c, 50, 3);
  const auto opt = oracle::best_subset([&](const oracle::Set& s) { return oracle::coverage(sets, w, s); }, 8, 2);
  double best_drawn = 0.0;
  for (const auto& ws : portfolio.support()) best_drawn = std::max(best_drawn, oracle::coverage(sets, w, ws.set));
  CHECK(best_drawn >= (1 - std::exp(-1.0)) * opt.second);
  CHECK(portfolio_cvar(portfolio, problem, 1.0) >= (1 - std::exp(-1.0)) * opt.second);
}

TEST_CASE("alpha one portfolio cvar is the expectation") {
  const auto base = ProbabilisticCoverage::coverage({{0, 1}, {1, 2}, {2}}, VectorXd::Ones(3));
  std::vector<ObjectivePtr> members{std::make_shared<ProbabilisticCoverage>(base.reweighted(vec({1, 0, 2}))),
                                    std::make_shared<ProbabilisticCoverage>(base.reweighted(vec({0, 3, 1})))};
  const Constraint c = Constraint::cardinality(3, 1);
  const auto problem = portfolio_reduction(members, vec({0.25, 0.75}), c, 500, 1);
  const MixedStrategy p({{{0}, 0.5}, {{2}, 0.5}});
  const double expected = 0.25 * (0.5 * 1 + 0.5 * 2) + 0.75 * (0.5 * 3 + 0.5 * 1);
  CHECK(portfolio_cvar(p, problem, 1.0) == doctest::Approx(expected));

  CvarConfig cfg;
  cfg.alpha = 1.0;
  cfg.iterations = 40;
  cfg.scenario_samples = 200;
  const auto cv = rascal_solve(*problem.objective, *problem.polytope, cfg, 5);
  const auto ex = expectation_frank_wolfe(*problem.objective, *problem.polytope, cfg, 5);
  const auto sc = ScenarioSet::exact(*problem.objective);
  CHECK(cvar_alpha(*problem.objective, cv.x, sc, 1.0) ==
        doctest::Approx(cvar_alpha(*problem.objective, ex.x, sc, 1.0)).epsilon(0.02));
}

TEST_CASE("a mixed portfolio beats every single set") {
  // item k alone serves scenario k
  const auto base = ProbabilisticCoverage::coverage({{0}, {1}}, VectorXd::Ones(2));
  std::vector<ObjectivePtr> members{std::make_shared<ProbabilisticCoverage>(base.reweighted(vec({1, 0}))),
                                    std::make_shared<ProbabilisticCoverage>(base.reweighted(vec({0, 1})))};
  const Constraint c = Constraint::cardinality(2, 1);
  const auto problem = portfolio_reduction(members, vec({0.5, 0.5}), c, 500, 1);
  // enumerate single sets and 50/50 pairs
  const std::vector<ItemSet> singles{{}, {0}, {1}};
  double best_single = 0.0, best_pair = 0.0;
  for (const auto& s : singles) best_single = std::max(best_single, portfolio_cvar(MixedStrategy::pure(s), problem, 0.5));
  for (const auto& a : singles)
    for (const auto& b : singles)
      if (a != b) best_pair = std::max(best_pair, portfolio_cvar(MixedStrategy({{a, 0.5}, {b, 0.5}}), problem, 0.5));
  CHECK(best_single == 0.0);
  CHECK(best_pair == doctest::Approx(0.5));

  CvarConfig cfg;
  cfg.alpha = 0.5;
  cfg.iterations = 100;
  cfg.smoothing_width = 0.01;
  const auto sc = ScenarioSet::exact(*problem.objective);
  const auto r = rascal_solve(*problem.objective, *problem.polytope, cfg, 6, &sc);
  CHECK(portfolio_cvar(portfolio_from_solution(r, c, 200, 7), problem, 0.5) > 0.3);
}
