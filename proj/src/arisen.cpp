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

#include "robsub/arisen.hpp"

#include <atomic>
#include <cmath>
#include <numeric>

#include "robsub/cascade.hpp"
#include "robsub/greedy.hpp"

namespace robsub {

QueryLedger::QueryLedger(const Graph& hidden, long long budget, std::uint64_t seed)
    : hidden_(&hidden),
      budget_(budget),
      queried_(static_cast<std::size_t>(hidden.num_nodes()), 0),
      adjacent_(static_cast<std::size_t>(hidden.num_nodes()), 0),
      edge_revealed_(static_cast<std::size_t>(hidden.num_edges()), 0),
      unqueried_(static_cast<std::size_t>(hidden.num_nodes())),
      pool_index_(static_cast<std::size_t>(hidden.num_nodes())),
      rng_(seed) {
  if (budget < 0) throw ParameterError("ledger: negative budget");
  std::iota(unqueried_.begin(), unqueried_.end(), 0);
  std::iota(pool_index_.begin(), pool_index_.end(), std::size_t{0});
}

bool QueryLedger::queried(int v) const {
  if (!hidden_->valid_node(v)) throw InputError("ledger: node out of range");
  return queried_[static_cast<std::size_t>(v)] != 0;
}

ItemSet QueryLedger::queried_nodes() const {
  ItemSet out;
  for (int v = 0; v < num_nodes(); ++v)
    if (queried_[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

std::vector<int> QueryLedger::revealed_edges() const {
  std::vector<int> out;
  for (std::size_t e = 0; e < edge_revealed_.size(); ++e)
    if (edge_revealed_[e]) out.push_back(static_cast<int>(e));
  return out;
}

void QueryLedger::reveal(int v) {
  if (budget_ <= 0) throw BudgetError("ledger: query budget exhausted");
  --budget_;
  ++used_;
  const auto sv = static_cast<std::size_t>(v);
  queried_[sv] = 1;
  adjacent_[sv] = 1;
  // Swap-remove v from the unqueried pool.
  const std::size_t at = pool_index_[sv];
  const int last = unqueried_.back();
  unqueried_[at] = last;
  pool_index_[static_cast<std::size_t>(last)] = at;
  unqueried_.pop_back();
  for (const auto& nb : hidden_->neighbors(v)) {
    adjacent_[static_cast<std::size_t>(nb.node)] = 1;
    auto& flag = edge_revealed_[static_cast<std::size_t>(nb.edge)];
    if (!flag) {
      flag = 1;
      ++revealed_count_;
    }
  }
}

std::span<const Neighbor> QueryLedger::query_node(int v) {
  if (queried(v)) throw ProtocolError("ledger: node already queried");
  if (!adjacent_[static_cast<std::size_t>(v)])
    throw ProtocolError("ledger: node is not adjacent to a queried node");
  reveal(v);
  return hidden_->neighbors(v);
}

std::span<const Neighbor> QueryLedger::neighbors(int v) const {
  if (!queried(v)) throw ProtocolError("ledger: adjacency of an unqueried node is hidden");
  return hidden_->neighbors(v);
}

std::span<const Neighbor> QueryLedger::visit(int v) {
  if (queried(v)) return hidden_->neighbors(v);
  return query_node(v);
}

int QueryLedger::query_random() {
  if (num_nodes() == 0) throw InputError("ledger: empty graph");
  const int v = static_cast<int>(rng_.below(static_cast<std::uint64_t>(num_nodes())));
  ++draws_;
  if (!queried_[static_cast<std::size_t>(v)]) reveal(v);
  return v;
}

int QueryLedger::query_random_unqueried() {
  if (unqueried_.empty()) throw ProtocolError("ledger: every node is already queried");
  if (budget_ <= 0) throw BudgetError("ledger: query budget exhausted");
  const int v = unqueried_[rng_.below(unqueried_.size())];
  ++draws_;
  reveal(v);
  return v;
}

double community_size_estimate(double degree, int n, const SbmParams& params) {
  const double gap = params.p_within - params.p_between;
  if (!(gap > 0.0)) throw ParameterError("size estimate needs p_within > p_between");
  const double s = 1.0 + (degree - n * params.p_between) / gap;
  return std::clamp(s, 1.0, static_cast<double>(std::max(n, 1)));
}

WalkEstimate random_walk_estimate(QueryLedger& ledger, int start, int walk_len,
                                  const SbmParams& params) {
  if (walk_len < 0) throw ParameterError("walk length must be >= 0");
  WalkEstimate out;
  out.start = start;
  std::span<const Neighbor> nbrs;
  try {
    nbrs = ledger.queried(start) ? ledger.neighbors(start) : ledger.query_node(start);
  } catch (const BudgetError&) {
    out.truncated = true;
    return out;
  }
  const double start_degree = static_cast<double>(nbrs.size());
  int current = start;
  for (int step = 0; step < walk_len; ++step) {
    if (nbrs.empty()) break;
    const int next = nbrs[ledger.rng().below(nbrs.size())].node;
    if (!ledger.queried(next) && ledger.budget_remaining() <= 0) {
      out.truncated = true;
      break;
    }
    nbrs = ledger.visit(next);
    current = next;
    out.visited.push_back(current);
  }
  double total = 0.0;
  for (int v : out.visited) total += static_cast<double>(ledger.neighbors(v).size());
  out.degree_estimate = out.visited.empty() ? start_degree : total / static_cast<double>(out.visited.size());
  out.size_estimate = community_size_estimate(out.degree_estimate, ledger.num_nodes(), params);
  return out;
}

SeedDistribution build_seed_distribution(const std::vector<WalkEstimate>& estimates) {
  if (estimates.empty()) throw InputError("seed distribution: no estimates");
  SeedDistribution out;
  double total = 0.0;
  for (const auto& e : estimates) {
    if (!(e.size_estimate >= 1.0)) throw InputError("seed distribution: size estimate below 1");
    out.prospective.push_back(e.start);
    out.weights.push_back(1.0 / e.size_estimate);
    total += out.weights.back();
  }
  for (double& w : out.weights) w /= total;
  return out;
}

int ArisenConfig::prospective_for(int k) const {
  if (prospective > 0) return prospective;
  return static_cast<int>(std::ceil(3.0 * k * std::log(static_cast<double>(k)))) + k;
}

long long ArisenConfig::budget_for(int k) const {
  if (budget > 0) return budget;
  const long long r = prospective_for(k);
  return r * walk_len + r;
}

ArisenResult arisen_select(const Graph& hidden, int k, const SbmParams& params,
                           const ArisenConfig& cfg, std::uint64_t seed) {
  if (k < 1 || k > hidden.num_nodes()) throw ParameterError("arisen: need 1 <= K <= n");
  if (cfg.walk_len < 0) throw ParameterError("arisen: walk length must be >= 0");
  const int r = cfg.prospective_for(k);
  const long long budget = cfg.budget_for(k);
  if (budget < static_cast<long long>(r) * cfg.walk_len + r)
    throw ParameterError("arisen: budget below R * walk_len + R");

  QueryLedger ledger(hidden, budget, seed);
  ArisenResult out;
  for (int i = 0; i < r; ++i) {
    const int start = ledger.query_random();
    out.estimates.push_back(random_walk_estimate(ledger, start, cfg.walk_len, params));
    if (out.estimates.back().truncated) ++out.truncations;
  }
  out.distribution = build_seed_distribution(out.estimates);

  Rng draw(derive_seed(seed, 1));
  std::vector<double> cumulative(out.distribution.weights.size());
  std::partial_sum(out.distribution.weights.begin(), out.distribution.weights.end(), cumulative.begin());
  std::vector<char> chosen(static_cast<std::size_t>(hidden.num_nodes()), 0);
  auto take = [&](int v) {
    chosen[static_cast<std::size_t>(v)] = 1;
    out.seeds.push_back(v);
  };
  for (int j = 0; j < k; ++j) {
    const double u = draw.uniform() * cumulative.back();
    const auto idx = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin(),
                                 static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
    const WalkEstimate& est = out.estimates[idx];
    // Nodes seen on the walk share the prospective's community with high
    // probability; their degrees are already known, so picking the best
    // connected one costs nothing.
    std::vector<int> options{est.start};
    if (cfg.seed_choice == ArisenConfig::SeedChoice::walk_max_degree)
      for (int v : est.visited)
        if (std::find(options.begin(), options.end(), v) == options.end()) options.push_back(v);
    std::stable_sort(options.begin(), options.end(), [&](int a, int b) {
      const auto da = ledger.neighbors(a).size(), db = ledger.neighbors(b).size();
      return da != db ? da > db : a < b;
    });
    const auto fresh = std::find_if(options.begin(), options.end(),
                                    [&](int v) { return !chosen[static_cast<std::size_t>(v)]; });
    if (fresh != options.end()) {
      take(*fresh);
      continue;
    }
    options.clear();
    for (int v : est.visited)
      if (!chosen[static_cast<std::size_t>(v)] && std::find(options.begin(), options.end(), v) == options.end())
        options.push_back(v);
    if (options.empty())
      for (const auto& nb : ledger.neighbors(est.start))
        if (!chosen[static_cast<std::size_t>(nb.node)]) options.push_back(nb.node);
    if (options.empty())
      for (int v : ledger.queried_nodes())
        if (!chosen[static_cast<std::size_t>(v)]) {
          options.push_back(v);
          break;
        }
    if (!options.empty()) take(options[draw.below(options.size())]);
  }
  out.seeds = normalized(std::move(out.seeds));
  out.queries_used = ledger.queries_used();
  return out;
}

ChangeSample change_sample(const Graph& hidden, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ParameterError("change: fraction must lie in (0, 1]");
  const int n = hidden.num_nodes();
  const auto target = static_cast<long long>(std::ceil(fraction * n - 1e-9));
  QueryLedger ledger(hidden, target, seed);
  while (ledger.queries_used() < target) {
    const int v = ledger.query_random_unqueried();
    if (ledger.queries_used() >= target) break;
    const auto nbrs = ledger.neighbors(v);
    if (nbrs.empty()) continue;
    const int partner = nbrs[ledger.rng().below(nbrs.size())].node;
    if (!ledger.queried(partner)) ledger.query_node(partner);
  }
  ChangeSample out;
  std::vector<std::pair<int, int>> edges;
  for (int e : ledger.revealed_edges()) {
    edges.emplace_back(hidden.edge(e).u, hidden.edge(e).v);
    out.hidden_edge.push_back(e);
  }
  std::vector<int> labels(hidden.labels().begin(), hidden.labels().end());
  out.observed = Graph::from_edges(n, std::move(edges), std::move(labels));
  out.queried = ledger.queries_used();
  return out;
}

namespace {

class MinRatioObjective final : public SetObjective {
 public:
  MinRatioObjective(std::vector<std::shared_ptr<const InfluenceObjective>> spreads,
                    std::vector<SampleSpec> specs, std::vector<double> norms)
      : spreads_(std::move(spreads)), specs_(std::move(specs)), norms_(std::move(norms)) {}
  int ground_size() const override { return spreads_.front()->ground_size(); }
  double value(ItemSpan s, SampleSpec = {}) const override {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < spreads_.size(); ++g)
      worst = std::min(worst, spreads_[g]->value(s, specs_[g]) / norms_[g]);
    return worst;
  }

 private:
  std::vector<std::shared_ptr<const InfluenceObjective>> spreads_;
  std::vector<SampleSpec> specs_;
  std::vector<double> norms_;
};

}  // namespace

RobustPResult robust_p_heuristic(std::shared_ptr<const Graph> observed, int k,
                                 const std::vector<double>& p_grid, int horizon,
                                 std::size_t samples, std::uint64_t seed) {
  if (!observed) throw ParameterError("robust p: null graph");
  if (p_grid.empty()) throw ParameterError("robust p: empty p grid");
  if (k < 1 || k > observed->num_nodes()) throw ParameterError("robust p: need 1 <= K <= n");
  const Constraint c = Constraint::cardinality(observed->num_nodes(), k);
  std::vector<std::shared_ptr<const InfluenceObjective>> spreads;
  std::vector<SampleSpec> specs;
  std::vector<ItemSet> tuned;
  RobustPResult out;
  for (std::size_t g = 0; g < p_grid.size(); ++g) {
    spreads.push_back(influence_set_objective(observed, EdgeParams::uniform(*observed, p_grid[g]), horizon, samples));
    specs.push_back({samples, derive_seed(seed, g)});
    tuned.push_back(greedy_maximize(*spreads.back(), c, specs.back(), GreedyVariant::lazy));
    // A positive floor keeps ratios defined on edgeless graphs (spread >= K).
    out.normalizers.push_back(std::max(spreads.back()->value(tuned.back(), specs.back()), 1e-12));
  }
  auto ratios_of = [&](const ItemSet& s) {
    std::vector<double> r;
    for (std::size_t g = 0; g < p_grid.size(); ++g) r.push_back(spreads[g]->value(s, specs[g]) / out.normalizers[g]);
    return r;
  };
  auto min_of = [](const std::vector<double>& r) { return *std::min_element(r.begin(), r.end()); };
  if (p_grid.size() == 1) {
    out.seeds = tuned.front();
    out.ratios = ratios_of(out.seeds);
  } else {
    // The min-ratio is not submodular, so greedy on it carries no guarantee;
    // keep whichever of it and the per-p tuned sets is most robust.
    const MinRatioObjective robust(spreads, specs, out.normalizers);
    out.seeds = greedy_maximize(robust, c, {}, GreedyVariant::plain);
    out.ratios = ratios_of(out.seeds);
    for (const auto& candidate : tuned) {
      auto r = ratios_of(candidate);
      if (min_of(r) > min_of(out.ratios)) {
        out.seeds = candidate;
        out.ratios = std::move(r);
      }
    }
  }
  out.min_ratio = min_of(out.ratios);
  return out;
}

AttendanceModel AttendanceModel::constant(int n, double q) { return {VectorXd::Constant(n, q)}; }

void AttendanceModel::validate(int n) const {
  if (q.size() != n) throw InputError("attendance: one probability per node required");
  if ((q.array() < 0.0).any() || (q.array() > 1.0).any()) throw InputError("attendance: probabilities must lie in [0, 1]");
}

AttendanceSpread::AttendanceSpread(std::shared_ptr<const Graph> g, EdgeParams p, int horizon,
                                   AttendanceModel attendance, ItemSet attended, std::size_t samples)
    : graph_(std::move(g)),
      params_(std::move(p)),
      horizon_(horizon),
      attendance_(std::move(attendance)),
      attended_(normalized(std::move(attended))),
      samples_(samples) {
  if (!graph_) throw ParameterError("attendance spread: null graph");
  params_.validate(*graph_);
  attendance_.validate(graph_->num_nodes());
  if (horizon_ < 1) throw ParameterError("attendance spread: horizon must be >= 1");
}

double AttendanceSpread::value(ItemSpan invited, SampleSpec spec) const {
  ItemSet fresh;
  for (int v : invited)
    if (!contains(attended_, v)) fresh.push_back(v);
  if (samples_ == 0) {
    if (fresh.size() > 20) throw SizeError("attendance spread: too many invitees for the exact value");
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << fresh.size()); ++mask) {
      double prob = 1.0;
      ItemSet seeds = attended_;
      for (std::size_t i = 0; i < fresh.size(); ++i) {
        const double q = attendance_.q[fresh[i]];
        if (mask >> i & 1U) {
          prob *= q;
          seeds.push_back(fresh[i]);
        } else {
          prob *= 1.0 - q;
        }
      }
      if (prob > 0.0) total += prob * exact_spread(*graph_, params_, CascadeConfig::single(normalized(seeds), horizon_));
    }
    return total;
  }
  const std::size_t samples = spec.samples ? spec.samples : samples_;
  std::atomic<std::int64_t> activated{0};
  parallel_for(samples, [&](std::size_t r) {
    const std::uint64_t realization = derive_seed(spec.seed, r);
    const std::uint64_t coins = derive_seed(realization, 0xA77E4DULL);
    ItemSet seeds = attended_;
    for (int v : fresh)
      if (unit_from_bits(splitmix64(derive_seed(coins, static_cast<std::uint64_t>(v)))) < attendance_.q[v])
        seeds.push_back(v);
    if (seeds.empty()) return;
    const auto active = simulate_icm(*graph_, params_, CascadeConfig::single(normalized(seeds), horizon_), realization);
    activated += static_cast<std::int64_t>(active.size());
  });
  return static_cast<double>(activated.load()) / static_cast<double>(samples);
}

ItemSet plan_round(std::shared_ptr<const Graph> g, const EdgeParams& p, int horizon,
                   const ItemSet& attended, int k, const AttendanceModel& attendance,
                   std::size_t samples, std::uint64_t seed) {
  if (!g) throw ParameterError("plan round: null graph");
  if (k < 1) throw ParameterError("plan round: K must be >= 1");
  const int n = g->num_nodes();
  const AttendanceSpread f(g, p, horizon, attendance, attended, samples);
  // Attended seeds are never re-invited: they are fixed at zero marginal value
  // and excluded through the partition below.
  std::vector<int> part_of(static_cast<std::size_t>(n), 0);
  for (int v : attended) part_of[static_cast<std::size_t>(v)] = 1;
  const int open = n - static_cast<int>(attended.size());
  const Constraint c = Constraint::partition(part_of, {std::min(k, open), 0});
  return greedy_maximize(f, c, {samples, seed}, GreedyVariant::plain);
}

std::vector<AdaptiveRound> adaptive_greedy(std::shared_ptr<const Graph> g, const EdgeParams& p,
                                           int horizon, int k_per_round, int rounds,
                                           const AttendanceModel& attendance,
                                           std::size_t samples, std::uint64_t seed) {
  if (rounds < 1) throw ParameterError("adaptive greedy: rounds must be >= 1");
  if (!g) throw ParameterError("adaptive greedy: null graph");
  attendance.validate(g->num_nodes());
  std::vector<AdaptiveRound> trace;
  ItemSet attended;
  const AttendanceModel certain = AttendanceModel::constant(g->num_nodes(), 1.0);
  for (int t = 0; t < rounds; ++t) {
    AdaptiveRound row;
    if (static_cast<int>(attended.size()) < g->num_nodes())
      row.invited = plan_round(g, p, horizon, attended, k_per_round, attendance, samples,
                               derive_seed(seed, 1, static_cast<std::uint64_t>(t)));
    Rng coins(derive_seed(seed, 2, static_cast<std::uint64_t>(t)));
    for (int v : row.invited)
      if (coins.uniform() < attendance.q[v]) row.attended.push_back(v);
    attended = normalized([&] {
      ItemSet all = attended;
      all.insert(all.end(), row.attended.begin(), row.attended.end());
      return all;
    }());
    const AttendanceSpread spread(g, p, horizon, certain, attended, samples);
    row.cumulative_spread = spread.value({}, {samples, derive_seed(seed, 3, static_cast<std::uint64_t>(t))});
    trace.push_back(std::move(row));
  }
  return trace;
}

}  // namespace robsub
