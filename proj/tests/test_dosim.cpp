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
#include "robsub/dosim.hpp"

using namespace robsub;

namespace {

// Hub 0 with leaves 1, 2 and a pendant path 2-3-4.
const std::vector<std::pair<int, int>> kStarPath{{0, 1}, {0, 2}, {2, 3}, {3, 4}};

InfluenceGame star_path_game(double lo, double hi, int horizon) {
  InfluenceGame game;
  game.graph = std::make_shared<Graph>(Graph::from_edges(5, kStarPath));
  game.intervals = IntervalUncertainty::global(*game.graph, lo, hi);
  game.budget = 1;
  game.horizon = horizon;
  return game;
}

// ratio[g][v] from the enumeration oracle.
std::vector<std::vector<double>> oracle_ratios(const std::vector<double>& thetas, int horizon) {
  std::vector<std::vector<double>> out;
  for (double th : thetas) {
    std::vector<double> spread;
    for (int v = 0; v < 5; ++v)
      spread.push_back(oracle::icm_exact(5, kStarPath, std::vector<double>(4, th), horizon, {v}));
    const double best = *std::max_element(spread.begin(), spread.end());
    for (auto& s : spread) s /= best;
    out.push_back(spread);
  }
  return out;
}

}  // namespace

TEST_CASE("shared grid is evenly spaced and covers the endpoints") {
  const Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  const auto grid = discretize_params(IntervalUncertainty::global(g, 0.2, 0.8), 0.2, true);
  REQUIRE(grid.points.size() == 4);
  const double expect[4] = {0.2, 0.4, 0.6, 0.8};
  for (int i = 0; i < 4; ++i) {
    CHECK(grid.points[static_cast<std::size_t>(i)].prob[0] == doctest::Approx(expect[i]));
    CHECK(grid.points[static_cast<std::size_t>(i)].prob[1] == grid.points[static_cast<std::size_t>(i)].prob[0]);
  }
  CHECK(grid.points.back().prob[0] <= 0.8);
  CHECK(discretize_params(IntervalUncertainty::global(g, 0.3, 0.3), 0.1, true).points.size() == 1);
}

TEST_CASE("uncoupled grid is the product of per-edge grids") {
  const Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  const auto grid = discretize_params(IntervalUncertainty::global(g, 0.0, 1.0), 0.5, false);
  CHECK(grid.points.size() == 9);
  const Graph big = generate_sbm({{10}, 1.0, 0.0}, 1);
  CHECK_THROWS_AS(discretize_params(IntervalUncertainty::global(big, 0.0, 1.0), 0.5, false), SizeError);
  CHECK_THROWS_AS(discretize_params(IntervalUncertainty::global(g, 0.0, 1.0), 0.0, true), ParameterError);
}

TEST_CASE("interval validation") {
  const Graph g = Graph::from_edges(2, {{0, 1}});
  CHECK_THROWS(IntervalUncertainty::global(g, 0.6, 0.4).validate(g));
  CHECK_THROWS(IntervalUncertainty::global(g, -0.1, 0.4).validate(g));
}

TEST_CASE("payoff ratio examples") {
  InfluenceGame pair;
  pair.graph = std::make_shared<Graph>(Graph::from_edges(2, {{0, 1}}));
  pair.intervals = IntervalUncertainty::global(*pair.graph, 0.0, 1.0);
  pair.horizon = 2;
  for (double th : {0.0, 0.3, 0.9}) {
    const EdgeParams p = EdgeParams::uniform(*pair.graph, th);
    CHECK(payoff_ratio({0}, p, pair, 1) == doctest::Approx(1.0));
    CHECK(payoff_ratio({1}, p, pair, 1) == doctest::Approx(1.0));
  }
  const auto game = star_path_game(0.1, 0.9, 2);
  const auto ratios = oracle_ratios({0.5}, 2);
  for (int v = 0; v < 5; ++v) {
    const double r = payoff_ratio({v}, EdgeParams::uniform(*game.graph, 0.5), game, 1);
    CHECK(r == doctest::Approx(ratios[0][static_cast<std::size_t>(v)]).epsilon(1e-12));
    CHECK(r > 0.0);
    CHECK(r <= 1.0 + 1e-12);
  }
}

TEST_CASE("equilibrium on the star with a pendant path") {
  const auto game = star_path_game(0.1, 0.9, 2);
  DosimConfig cfg;
  cfg.delta_grid = 0.8;
  const auto res = dosim_solve(game, cfg, 4);
  REQUIRE(res.grid.points.size() == 2);
  const auto ratios = oracle_ratios({0.1, 0.9}, 2);
  double pure_best = 0.0;
  std::vector<std::pair<double, double>> rows;
  for (int v = 0; v < 5; ++v) {
    pure_best = std::max(pure_best, std::min(ratios[0][static_cast<std::size_t>(v)], ratios[1][static_cast<std::size_t>(v)]));
    rows.emplace_back(ratios[0][static_cast<std::size_t>(v)], ratios[1][static_cast<std::size_t>(v)]);
  }
  const double value = oracle::two_column_game(rows);
  CHECK(res.equilibrium.converged);
  CHECK(res.equilibrium.game_value >= pure_best - 1e-9);
  CHECK(res.equilibrium.game_value == doctest::Approx(value).epsilon(1e-3));
  for (std::size_t i = 1; i < res.equilibrium.security_values.size(); ++i)
    CHECK(res.equilibrium.security_values[i] >= res.equilibrium.security_values[i - 1]);

  // greedy at the midpoint, judged at its worst grid point
  const double mid = 0.5;
  std::vector<double> spread;
  for (int v = 0; v < 5; ++v) spread.push_back(oracle::icm_exact(5, kStarPath, std::vector<double>(4, mid), 2, {v}));
  const auto pick = static_cast<std::size_t>(std::max_element(spread.begin(), spread.end()) - spread.begin());
  const double greedy_worst = std::min(ratios[0][pick], ratios[1][pick]);
  CHECK(res.worst_grid_ratio >= greedy_worst - 1e-9);
}

TEST_CASE("degenerate intervals reduce to greedy") {
  const auto game = star_path_game(0.4, 0.4, 2);
  const auto res = dosim_solve(game, {}, 2);
  CHECK(res.grid.points.size() == 1);
  CHECK(res.equilibrium.game_value == doctest::Approx(1.0));
  const auto ratios = oracle_ratios({0.4}, 2);
  const auto best = static_cast<int>(std::max_element(ratios[0].begin(), ratios[0].end()) - ratios[0].begin());
  REQUIRE(res.equilibrium.security_strategy.size() == 1);
  CHECK(res.equilibrium.security_strategy.support()[0].set == ItemSet{best});
}

TEST_CASE("estimated payoffs stay close to the exact ones") {
  auto game = star_path_game(0.1, 0.9, 2);
  game.opt = OptMode::greedy;
  game.samples = 4000;
  DosimConfig cfg;
  cfg.delta_grid = 0.8;
  const auto res = dosim_solve(game, cfg, 8);
  const auto ratios = oracle_ratios({0.1, 0.9}, 2);
  std::vector<std::pair<double, double>> rows;
  for (int v = 0; v < 5; ++v) rows.emplace_back(ratios[0][static_cast<std::size_t>(v)], ratios[1][static_cast<std::size_t>(v)]);
  CHECK(std::abs(res.equilibrium.game_value - oracle::two_column_game(rows)) <= 0.05);
}

TEST_CASE("raw spread payoff") {
  auto game = star_path_game(0.2, 0.2, 1);
  game.payoff = PayoffMode::raw;
  const GamePayoffs payoffs(game, discretize_params(game.intervals, 0.1, true), 1);
  CHECK(payoffs.payoff({0}, 0) == doctest::Approx(1.0 + 2 * 0.2));
}

TEST_CASE("game validation") {
  auto game = star_path_game(0.1, 0.9, 1);
  game.budget = 6;
  CHECK_THROWS_AS(game.validate(), ParameterError);
  game.budget = 1;
  game.horizon = 0;
  CHECK_THROWS_AS(game.validate(), ParameterError);
}
