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

#include "robsub/cascade.hpp"

#include <cmath>
#include <limits>

namespace robsub {

namespace {

constexpr std::uint8_t kInactive = 255;
constexpr int kMaxHorizon = 250;

struct Scratch {
  std::vector<std::vector<int>> buckets;
};

Scratch& scratch(int horizon) {
  thread_local Scratch s;
  if (s.buckets.size() < static_cast<std::size_t>(horizon) + 1)
    s.buckets.resize(static_cast<std::size_t>(horizon) + 1);
  for (auto& b : s.buckets) b.clear();
  return s;
}

// Activation times stored densely.
struct DenseTimes {
  std::vector<std::uint8_t>& t;
  int get(int v) const { return t[static_cast<std::size_t>(v)]; }
  void set(int v, int time) { t[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(time); }
};

// Read-only base with a stamped per-thread overlay for writes, so trial
// propagation never copies or mutates the shared state.
struct OverlayTimes {
  const std::vector<std::uint8_t>& base;
  std::vector<std::uint32_t>& stamp;
  std::vector<std::uint8_t>& value;
  std::uint32_t generation;
  int get(int v) const {
    const auto i = static_cast<std::size_t>(v);
    return stamp[i] == generation ? value[i] : base[i];
  }
  void set(int v, int time) {
    const auto i = static_cast<std::size_t>(v);
    stamp[i] = generation;
    value[i] = static_cast<std::uint8_t>(time);
  }
};

// Earliest-arrival propagation. A node's time is the step at whose end it
// became active (seeds scheduled for step t carry t-1). Nodes already timed
// are assumed settled; buckets hold the nodes whose times were lowered.
template <typename Times>
std::int64_t propagate_from_buckets(const Graph& g, const EdgeParams& p, int horizon,
                                    std::uint64_t seed, Times times, Scratch& s) {
  std::int64_t newly = 0;
  for (int a = 0; a < horizon; ++a) {
    auto& bucket = s.buckets[static_cast<std::size_t>(a)];
    for (std::size_t idx = 0; idx < bucket.size(); ++idx) {
      const int u = bucket[idx];
      if (times.get(u) != a) continue;
      for (const auto& nb : g.neighbors(u)) {
        const int current = times.get(nb.node);
        if (current <= a + 1) continue;
        const double pe = p.prob[nb.edge];
        if (pe <= 0.0) continue;
        const int last = std::min(horizon, current - 1);
        int hit = -1;
        for (int step = a + 1; step <= last; ++step) {
          if (pe >= 1.0 || cascade_coin(seed, nb.edge, step) < pe) {
            hit = step;
            break;
          }
        }
        if (hit < 0) continue;
        if (current == kInactive) ++newly;
        times.set(nb.node, hit);
        if (hit < horizon) s.buckets[static_cast<std::size_t>(hit)].push_back(nb.node);
      }
    }
  }
  return newly;
}

std::vector<std::uint8_t> activation_times(const Graph& g, const EdgeParams& p,
                                           const CascadeConfig& cfg, std::uint64_t seed) {
  std::vector<std::uint8_t> times(static_cast<std::size_t>(g.num_nodes()), kInactive);
  auto& s = scratch(cfg.horizon);
  for (std::size_t t = 0; t < cfg.schedule.size(); ++t) {
    for (int v : cfg.schedule[t]) {
      auto& tv = times[static_cast<std::size_t>(v)];
      if (tv > t) {
        tv = static_cast<std::uint8_t>(t);
        s.buckets[t].push_back(v);
      }
    }
  }
  propagate_from_buckets(g, p, cfg.horizon, seed, DenseTimes{times}, s);
  return times;
}

}  // namespace

CascadeConfig CascadeConfig::single(ItemSet seeds, int horizon) {
  CascadeConfig cfg;
  cfg.horizon = horizon;
  cfg.schedule.push_back(normalized(std::move(seeds)));
  return cfg;
}

void CascadeConfig::validate(const Graph& g) const {
  if (horizon < 1) throw ParameterError("cascade: horizon must be >= 1");
  if (horizon > kMaxHorizon) throw ParameterError("cascade: horizon above 250");
  if (schedule.size() > static_cast<std::size_t>(horizon))
    throw ParameterError("cascade: seed schedule longer than the horizon");
  for (const auto& step : schedule)
    for (int v : step)
      if (!g.valid_node(v)) throw InputError("cascade: seed id " + std::to_string(v) + " out of range");
}

ItemSet CascadeConfig::all_seeds() const {
  ItemSet all;
  for (const auto& step : schedule) all.insert(all.end(), step.begin(), step.end());
  return normalized(std::move(all));
}

ItemSet simulate_icm(const Graph& g, const EdgeParams& p, const CascadeConfig& cfg,
                     std::uint64_t seed) {
  cfg.validate(g);
  if (p.prob.size() != g.num_edges()) throw InputError("cascade: edge params do not match graph");
  const auto times = activation_times(g, p, cfg, seed);
  ItemSet active;
  for (int v = 0; v < g.num_nodes(); ++v)
    if (times[static_cast<std::size_t>(v)] != kInactive) active.push_back(v);
  return active;
}

SpreadEstimate expected_spread(const Graph& g, const EdgeParams& p, const CascadeConfig& cfg,
                               std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw ParameterError("expected_spread: samples must be >= 1");
  cfg.validate(g);
  if (p.prob.size() != g.num_edges()) throw InputError("cascade: edge params do not match graph");
  std::vector<double> sizes(samples);
  parallel_for(samples, [&](std::size_t r) {
    const auto times = activation_times(g, p, cfg, derive_seed(seed, r));
    sizes[r] = static_cast<double>(
        std::count_if(times.begin(), times.end(), [](std::uint8_t t) { return t != kInactive; }));
  });
  const double n = static_cast<double>(samples);
  const double mean = pairwise_sum(sizes) / n;
  double ss = 0.0;
  for (double x : sizes) ss += (x - mean) * (x - mean);
  const double sd = samples > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, sd / std::sqrt(n)};
}

// ---------------------------------------------------------------------------
// Exact oracle: depth-first enumeration of the synchronous step process,
// branching on every attempt that actually happens.

namespace {

struct ExactWalker {
  const Graph& g;
  const EdgeParams& p;
  const CascadeConfig& cfg;
  double total = 0.0;

  void run_step(int step, std::vector<char> active, double prob) {
    if (step > cfg.horizon) {
      total += prob * static_cast<double>(std::count(active.begin(), active.end(), 1));
      return;
    }
    if (static_cast<std::size_t>(step) <= cfg.schedule.size())
      for (int v : cfg.schedule[static_cast<std::size_t>(step) - 1])
        active[static_cast<std::size_t>(v)] = 1;
    std::vector<int> attempts;  // edges crossing the active frontier
    for (int e = 0; e < g.num_edges(); ++e) {
      const auto& ed = g.edge(e);
      if (active[static_cast<std::size_t>(ed.u)] != active[static_cast<std::size_t>(ed.v)])
        attempts.push_back(e);
    }
    std::vector<char> next = active;
    branch(step, active, next, attempts, 0, prob);
  }

  void branch(int step, const std::vector<char>& active, std::vector<char>& next,
              const std::vector<int>& attempts, std::size_t i, double prob) {
    if (prob == 0.0) return;
    if (i == attempts.size()) {
      run_step(step + 1, next, prob);
      return;
    }
    const int e = attempts[i];
    const auto& ed = g.edge(e);
    const int target = active[static_cast<std::size_t>(ed.u)] ? ed.v : ed.u;
    const double pe = p.prob[e];
    const char before = next[static_cast<std::size_t>(target)];
    if (pe > 0.0) {
      next[static_cast<std::size_t>(target)] = 1;
      branch(step, active, next, attempts, i + 1, prob * pe);
      next[static_cast<std::size_t>(target)] = before;
    }
    if (pe < 1.0) branch(step, active, next, attempts, i + 1, prob * (1.0 - pe));
  }
};

}  // namespace

double exact_spread(const Graph& g, const EdgeParams& p, const CascadeConfig& cfg,
                    int max_edge_steps) {
  cfg.validate(g);
  p.validate(g);
  if (static_cast<long long>(g.num_edges()) * cfg.horizon > max_edge_steps)
    throw SizeError("exact_spread: |E| * horizon = " +
                    std::to_string(static_cast<long long>(g.num_edges()) * cfg.horizon) +
                    " exceeds the enumeration cap " + std::to_string(max_edge_steps));
  ExactWalker walker{g, p, cfg};
  walker.run_step(1, std::vector<char>(static_cast<std::size_t>(g.num_nodes()), 0), 1.0);
  return walker.total;
}

// ---------------------------------------------------------------------------

SpreadSampler::SpreadSampler(const Graph& g, const EdgeParams& p, int horizon,
                             std::size_t samples, std::uint64_t seed)
    : graph_(&g), params_(&p), horizon_(horizon), samples_(samples), seed_(seed) {
  if (samples < 1) throw ParameterError("spread sampler: samples must be >= 1");
  if (horizon < 1 || horizon > kMaxHorizon) throw ParameterError("spread sampler: bad horizon");
  if (p.prob.size() != g.num_edges()) throw InputError("spread sampler: params do not match graph");
}

std::int64_t SpreadSampler::total_activated(ItemSpan seeds) const {
  const auto cfg = CascadeConfig::single(ItemSet(seeds.begin(), seeds.end()), horizon_);
  cfg.validate(*graph_);
  std::vector<std::int64_t> counts(samples_);
  parallel_for(samples_, [&](std::size_t r) {
    const auto times = activation_times(*graph_, *params_, cfg, realization_seed(r));
    counts[r] = std::count_if(times.begin(), times.end(),
                              [](std::uint8_t t) { return t != kInactive; });
  });
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

SpreadSampler::State SpreadSampler::empty_state() const {
  State s;
  s.times_.assign(samples_,
                  std::vector<std::uint8_t>(static_cast<std::size_t>(graph_->num_nodes()), kInactive));
  return s;
}

SpreadSampler::State SpreadSampler::state_for(ItemSpan seeds) const {
  State s = empty_state();
  for (int v : seeds) add(s, v);
  return s;
}

std::int64_t SpreadSampler::propagate(std::vector<std::uint8_t>& times, std::size_t r,
                                      int node) const {
  auto& tv = times[static_cast<std::size_t>(node)];
  if (tv == 0) return 0;
  auto& s = scratch(horizon_);
  std::int64_t newly = tv == kInactive ? 1 : 0;
  tv = 0;
  s.buckets[0].push_back(node);
  return newly + propagate_from_buckets(*graph_, *params_, horizon_, realization_seed(r),
                                        DenseTimes{times}, s);
}

std::int64_t SpreadSampler::gain(const State& state, int node) const {
  if (!graph_->valid_node(node)) throw InputError("spread sampler: node out of range");
  if (contains(state.seeds_, node)) return 0;
  const auto n = static_cast<std::size_t>(graph_->num_nodes());
  std::vector<std::int64_t> counts(samples_);
  parallel_for(samples_, [&](std::size_t r) {
    thread_local std::vector<std::uint32_t> stamp;
    thread_local std::vector<std::uint8_t> value;
    thread_local std::uint32_t generation = 0;
    if (stamp.size() < n || generation == UINT32_MAX) {
      stamp.assign(std::max(n, stamp.size()), 0);
      value.resize(stamp.size());
      generation = 0;
    }
    ++generation;
    const auto& base = state.times_[r];
    if (base[static_cast<std::size_t>(node)] == 0) {
      counts[r] = 0;
      return;
    }
    OverlayTimes times{base, stamp, value, generation};
    auto& s = scratch(horizon_);
    const std::int64_t self = base[static_cast<std::size_t>(node)] == kInactive ? 1 : 0;
    times.set(node, 0);
    s.buckets[0].push_back(node);
    counts[r] = self + propagate_from_buckets(*graph_, *params_, horizon_, realization_seed(r), times, s);
  });
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

void SpreadSampler::add(State& state, int node) const {
  if (!graph_->valid_node(node)) throw InputError("spread sampler: node out of range");
  if (contains(state.seeds_, node)) return;
  std::vector<std::int64_t> counts(samples_);
  parallel_for(samples_, [&](std::size_t r) { counts[r] = propagate(state.times_[r], r, node); });
  for (auto c : counts) state.total_ += c;
  state.seeds_ = with_item(state.seeds_, node);
}

}  // namespace robsub
