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
#include <map>
#include <memory>
#include <set>

#include "oracles.hpp"
#include "robsub/arisen.hpp"

using namespace robsub;

namespace {

// Revealed edges must be exactly the incident edges of queried nodes.
void check_sound(const QueryLedger& ledger, const Graph& g) {
  std::set<int> expect;
  for (int v : ledger.queried_nodes())
    for (const auto& nb : g.neighbors(v)) expect.insert(nb.edge);
  const auto got = ledger.revealed_edges();
  CHECK(std::vector<int>(expect.begin(), expect.end()) == got);
  CHECK(ledger.num_revealed_edges() == got.size());
  CHECK(ledger.budget_remaining() >= 0);
}

std::vector<std::pair<int, int>> edge_pairs(const Graph& g) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : g.edges()) out.emplace_back(e.u, e.v);
  return out;
}

}  // namespace

TEST_CASE("ledger on a triangle") {
  const Graph tri = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  QueryLedger ledger(tri, 2, 1);
  CHECK_THROWS_AS(ledger.query_node(0), ProtocolError);  // nothing queried yet
  const int v = ledger.query_random();
  CHECK(ledger.num_revealed_edges() == 2);
  CHECK(ledger.queries_used() == 1);
  CHECK(ledger.random_draws_used() == 1);
  CHECK_THROWS_AS(ledger.query_node(v), ProtocolError);
  CHECK(ledger.budget_remaining() == 1);
  const int w = (v + 1) % 3;
  CHECK(ledger.query_node(w).size() == 2);
  CHECK(ledger.num_revealed_edges() == 3);
  CHECK_THROWS_AS(ledger.query_node((v + 2) % 3), BudgetError);
  CHECK(ledger.visit(v).size() == 2);  // free repeat visit
  CHECK(ledger.budget_remaining() == 0);
  CHECK_THROWS_AS(ledger.neighbors((v + 2) % 3), ProtocolError);
  check_sound(ledger, tri);
}

TEST_CASE("querying every node reveals the graph") {
  const Graph g = generate_sbm({{15, 15}, 0.3, 0.05}, 8);
  QueryLedger ledger(g, 1000, 3);
  for (int i = 0; i < g.num_nodes(); ++i) {
    ledger.query_random_unqueried();
    check_sound(ledger, g);
  }
  CHECK(ledger.queries_used() == g.num_nodes());
  CHECK(static_cast<int>(ledger.num_revealed_edges()) == g.num_edges());
  CHECK_THROWS(ledger.query_random_unqueried());
}

TEST_CASE("walk on an isolated clique") {
  const SbmParams params{{6, 6}, 1.0, 0.0};
  const Graph g = generate_sbm(params, 1);
  QueryLedger ledger(g, 100, 2);
  const auto est = random_walk_estimate(ledger, ledger.query_random(), 5, params);
  CHECK(est.degree_estimate == 5.0);
  CHECK(est.size_estimate == 6.0);
  CHECK_FALSE(est.truncated);
  for (int v : est.visited) CHECK(ledger.queried(v));
  check_sound(ledger, g);
}

TEST_CASE("walk from a star center") {
  const Graph star = Graph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  QueryLedger ledger(star, 100, 5);
  while (ledger.query_random() != 0) {
  }
  const auto est = random_walk_estimate(ledger, 0, 2, {{5}, 0.5, 0.0});
  REQUIRE(est.visited.size() == 2);
  CHECK(est.visited[1] == 0);
  CHECK(est.degree_estimate == doctest::Approx((4 + 1) / 2.0));
}

TEST_CASE("walk truncates when the budget runs out") {
  const SbmParams params{{10}, 1.0, 0.0};
  const Graph g = generate_sbm(params, 1);
  QueryLedger ledger(g, 2, 2);
  const auto est = random_walk_estimate(ledger, ledger.query_random(), 8, params);
  CHECK(est.truncated);
  CHECK(ledger.budget_remaining() == 0);
  CHECK(est.size_estimate >= 1.0);
  CHECK(est.size_estimate <= 10.0);
}

TEST_CASE("size estimates on a planted partition") {
  const SbmParams params{{100, 100, 100, 100, 100}, 0.3, 0.005};
  const Graph g = generate_sbm(params, 17);
  double total = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    QueryLedger ledger(g, 100, derive_seed(4, t));
    const auto est = random_walk_estimate(ledger, ledger.query_random(), 4, params);
    CHECK(est.size_estimate >= 1.0);
    CHECK(est.size_estimate <= 500.0);
    total += est.size_estimate;
  }
  CHECK(std::abs(total / trials - 100.0) <= 20.0);
  CHECK(community_size_estimate(0.0, 500, params) == 1.0);
  CHECK(community_size_estimate(1e6, 500, params) == 500.0);
  CHECK_THROWS(community_size_estimate(3.0, 10, {{10}, 0.1, 0.1}));
}

TEST_CASE("seed distribution weights") {
  WalkEstimate a, b;
  a.start = 3;
  a.size_estimate = 10;
  b.start = 7;
  b.size_estimate = 20;
  const auto d = build_seed_distribution({a, b});
  CHECK(d.prospective == std::vector<int>{3, 7});
  CHECK(d.weights[0] == doctest::Approx(2.0 / 3));
  CHECK(d.weights[1] == doctest::Approx(1.0 / 3));
  b.size_estimate = 10;
  const auto u = build_seed_distribution({a, b});
  CHECK(u.weights[0] == doctest::Approx(0.5));
  CHECK_THROWS(build_seed_distribution({}));
}

TEST_CASE("inverse size weights even out community selection") {
  const SbmParams params{{50, 100, 150, 200}, 0.2, 0.01};
  const Graph g = generate_sbm(params, 2);
  const int trials = 2000, prospective = 400;
  std::vector<int> picked(4, 0);
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(9, t));
    std::vector<WalkEstimate> ests;
    for (int r = 0; r < prospective; ++r) {
      WalkEstimate e;
      e.start = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.num_nodes())));
      e.size_estimate = params.sizes[static_cast<std::size_t>(g.labels()[static_cast<std::size_t>(e.start)])];
      ests.push_back(e);
    }
    const auto d = build_seed_distribution(ests);
    std::discrete_distribution<std::size_t> pick(d.weights.begin(), d.weights.end());
    std::mt19937_64 eng(derive_seed(10, t));
    ++picked[static_cast<std::size_t>(g.labels()[static_cast<std::size_t>(d.prospective[pick(eng)])])];
  }
  const double sd = std::sqrt(0.25 * 0.75 / trials);
  for (int c : picked) CHECK(std::abs(c / double(trials) - 0.25) <= 3 * sd);
}

TEST_CASE("arisen query accounting") {
  const SbmParams params{{40, 40, 40}, 0.3, 0.01};
  const Graph g = generate_sbm(params, 3);
  ArisenConfig cfg;
  cfg.walk_len = 3;
  const int k = 3;
  const int r = cfg.prospective_for(k);
  CHECK(r == static_cast<int>(std::ceil(3 * k * std::log(k))) + k);
  const auto res = arisen_select(g, k, params, cfg, 5);
  CHECK(res.seeds.size() == static_cast<std::size_t>(k));
  CHECK(normalized(res.seeds).size() == res.seeds.size());
  REQUIRE(res.estimates.size() == static_cast<std::size_t>(r));
  long long steps = 0;
  for (const auto& e : res.estimates) steps += 1 + static_cast<long long>(e.visited.size());
  CHECK(res.truncations == 0);
  CHECK(steps == static_cast<long long>(r) * cfg.walk_len + r);
  // repeat visits are free, so charged queries never exceed the steps
  CHECK(res.queries_used <= steps);
  CHECK(res.queries_used <= cfg.budget_for(k));
  ArisenConfig tight = cfg;
  tight.budget = static_cast<long long>(r) * cfg.walk_len + r - 1;
  CHECK_THROWS_AS(arisen_select(g, k, params, tight, 5), ParameterError);
  // deterministic in the seed
  CHECK(arisen_select(g, k, params, cfg, 5).seeds == res.seeds);
}

TEST_CASE("arisen on a single community") {
  // dense enough that every node looks alike
  const SbmParams params{{30}, 0.9, 0.0};
  const Graph g = generate_sbm(params, 4);
  const auto res = arisen_select(g, 1, params, {}, 1);
  REQUIRE(res.seeds.size() == 1);
  const auto shared = std::make_shared<Graph>(g);
  const EdgeParams p = EdgeParams::uniform(g, 0.1);
  const auto f = influence_set_objective(shared, p, 2, 4000);
  const SampleSpec spec{4000, 7};
  const double best = f->value(greedy_maximize(*f, Constraint::cardinality(30, 1), spec, GreedyVariant::lazy), spec);
  CHECK(f->value(res.seeds, spec) >= 0.9 * best);
}

TEST_CASE("change sampling accounting") {
  const Graph g = generate_sbm({{20, 20}, 0.3, 0.02}, 5);
  const auto full = change_sample(g, 1.0, 3);
  CHECK(full.queried == g.num_nodes());
  CHECK(full.observed.edges() == g.edges());
  const Graph complete = generate_sbm({{100}, 1.0, 0.0}, 1);
  const auto part = change_sample(complete, 0.2, 4);
  CHECK(std::abs(part.queried - 20) <= 1);
  const auto mid = change_sample(g, 0.3, 6);
  CHECK(mid.observed.num_nodes() == g.num_nodes());
  for (int e = 0; e < mid.observed.num_edges(); ++e) {
    const Edge& seen = mid.observed.edge(e);
    const Edge& truth = g.edge(mid.hidden_edge[static_cast<std::size_t>(e)]);
    CHECK(seen == truth);
  }
  CHECK_THROWS(change_sample(g, 0.0, 1));
  CHECK_THROWS(change_sample(g, 1.5, 1));
}

TEST_CASE("robust p with a single grid point is plain greedy") {
  const auto g = std::make_shared<Graph>(generate_sbm({{15, 15}, 0.3, 0.05}, 6));
  const auto res = robust_p_heuristic(g, 3, {0.2}, 2, 300, 9);
  const auto f = influence_set_objective(g, EdgeParams::uniform(*g, 0.2), 2, 300);
  CHECK(res.seeds == greedy_maximize(*f, Constraint::cardinality(30, 3), {300, derive_seed(9, 0)}));
  CHECK(res.ratios.size() == 1);
  CHECK(res.min_ratio == doctest::Approx(1.0));
}

TEST_CASE("robust p hedges between a hub and a spread-out set") {
  // hub 0 with five leaves; a separate chain 6-7-8-9-10-11
  const auto g = std::make_shared<Graph>(Graph::from_edges(
      12, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {6, 7}, {7, 8}, {8, 9}, {9, 10}, {10, 11}}));
  const std::vector<double> grid{0.1, 0.9};
  const int k = 2, horizon = 2;
  const std::size_t samples = 2000;
  const auto res = robust_p_heuristic(g, k, grid, horizon, samples, 11);
  // evaluate every K-set with the same estimates and normalizers
  std::vector<std::shared_ptr<const InfluenceObjective>> fs;
  for (double p : grid) fs.push_back(influence_set_objective(g, EdgeParams::uniform(*g, p), horizon, samples));
  auto min_ratio = [&](const ItemSet& s) {
    double m = 1e300;
    for (std::size_t i = 0; i < grid.size(); ++i)
      m = std::min(m, fs[i]->value(s, {samples, derive_seed(11, i)}) / res.normalizers[i]);
    return m;
  };
  double best_pure = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ItemSet tuned = greedy_maximize(*fs[i], Constraint::cardinality(12, k), {samples, derive_seed(11, i)});
    best_pure = std::max(best_pure, min_ratio(tuned));
  }
  CHECK(res.min_ratio == doctest::Approx(min_ratio(res.seeds)));
  CHECK(res.min_ratio >= best_pure - 1e-12);
  // exhaustive robust optimum as a reference point
  double best = 0.0;
  for (int a = 0; a < 12; ++a)
    for (int b = a + 1; b < 12; ++b) best = std::max(best, min_ratio({a, b}));
  CHECK(res.min_ratio <= best + 1e-12);
  CHECK(res.min_ratio >= 0.9 * best);
}

TEST_CASE("adaptive greedy with certain attendance is greedy") {
  const auto g = std::make_shared<Graph>(generate_sbm({{12, 12}, 0.3, 0.03}, 7));
  const EdgeParams p = EdgeParams::uniform(*g, 0.2);
  const auto trace = adaptive_greedy(g, p, 2, 3, 1, AttendanceModel::constant(24, 1.0), 400, 13);
  REQUIRE(trace.size() == 1);
  const auto f = influence_set_objective(g, p, 2, 400);
  const ItemSet greedy = greedy_maximize(*f, Constraint::cardinality(24, 3), {400, derive_seed(13, 1, 0)});
  CHECK(trace[0].invited == greedy);
  CHECK(trace[0].attended == greedy);
  CHECK(trace[0].cumulative_spread >= 3.0);
}

TEST_CASE("adaptive greedy with no attendance spreads nothing") {
  const auto g = std::make_shared<Graph>(generate_sbm({{12, 12}, 0.3, 0.03}, 7));
  const auto trace = adaptive_greedy(g, EdgeParams::uniform(*g, 0.2), 2, 2, 3, AttendanceModel::constant(24, 0.0), 100, 1);
  REQUIRE(trace.size() == 3);
  for (const auto& row : trace) {
    CHECK(row.invited.size() == 2);
    CHECK(row.attended.empty());
    CHECK(row.cumulative_spread == 0.0);
  }
}

TEST_CASE("adaptive greedy is reproducible") {
  const auto g = std::make_shared<Graph>(generate_sbm({{12, 12}, 0.3, 0.03}, 7));
  const EdgeParams p = EdgeParams::uniform(*g, 0.2);
  const auto m = AttendanceModel::constant(24, 0.6);
  const auto a = adaptive_greedy(g, p, 2, 2, 3, m, 200, 21);
  const auto b = adaptive_greedy(g, p, 2, 2, 3, m, 200, 21);
  for (std::size_t t = 0; t < a.size(); ++t) {
    CHECK(a[t].invited == b[t].invited);
    CHECK(a[t].attended == b[t].attended);
    CHECK(a[t].cumulative_spread == b[t].cumulative_spread);
  }
}

TEST_CASE("two-round adaptive policy beats inviting everyone at once") {
  // small enough for exact spreads and a full policy tree
  const auto g = std::make_shared<Graph>(Graph::from_edges(
      9, {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {2, 8}, {1, 5}}));
  const EdgeParams p = EdgeParams::uniform(*g, 0.4);
  const int horizon = 1, k = 2;
  const double q = 0.5;
  const auto model = AttendanceModel::constant(9, q);
  const auto edges = edge_pairs(*g);
  const std::vector<double> probs(edges.size(), 0.4);
  auto spread = [&](const ItemSet& s) { return oracle::icm_exact(9, edges, probs, horizon, s); };

  // every subset of the invitees attends with probability q^|A| (1-q)^(|I|-|A|)
  auto outcomes = [&](const ItemSet& invited, const ItemSet& already) {
    std::vector<std::pair<ItemSet, double>> out;
    ItemSet fresh;
    for (int v : invited)
      if (!contains(already, v)) fresh.push_back(v);
    for (unsigned mask = 0; mask < (1U << fresh.size()); ++mask) {
      ItemSet att = already;
      double pr = 1.0;
      for (std::size_t i = 0; i < fresh.size(); ++i) {
        const bool in = mask >> i & 1U;
        pr *= in ? q : 1 - q;
        if (in) att.push_back(fresh[i]);
      }
      out.emplace_back(normalized(att), pr);
    }
    return out;
  };

  const ItemSet first = plan_round(g, p, horizon, {}, k, model, 0, 1);
  double adaptive = 0.0;
  for (const auto& [a1, p1] : outcomes(first, {})) {
    const ItemSet second = plan_round(g, p, horizon, a1, k, model, 0, 1);
    for (const auto& [a2, p2] : outcomes(second, a1)) adaptive += p1 * p2 * spread(a2);
  }
  const ItemSet batch = plan_round(g, p, horizon, {}, 2 * k, model, 0, 1);
  double fixed = 0.0;
  for (const auto& [a, pr] : outcomes(batch, {})) fixed += pr * spread(a);
  CHECK(adaptive >= fixed - 1e-12);

  // the exact attendance objective matches the enumeration
  const AttendanceSpread f(g, p, horizon, model, {}, 0);
  CHECK(f.value(batch) == doctest::Approx(fixed).epsilon(1e-12));
}
