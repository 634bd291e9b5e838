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

#include "robsub/swap_rounding.hpp"

#include <cmath>
#include <map>

namespace robsub {

MixedStrategy::MixedStrategy(std::vector<WeightedSet> support) {
  std::map<ItemSet, double> merged;
  double total = 0.0;
  for (auto& ws : support) {
    if (!(ws.weight >= 0.0)) throw InputError("mixed strategy: negative weight");
    if (ws.weight == 0.0) continue;
    merged[normalized(std::move(ws.set))] += ws.weight;
    total += ws.weight;
  }
  if (!(total > 0.0)) throw InputError("mixed strategy: empty support");
  for (auto& [set, w] : merged) support_.push_back({set, w / total});
}

MixedStrategy MixedStrategy::uniform(const std::vector<ItemSet>& draws) {
  std::vector<WeightedSet> support;
  for (const auto& s : draws) support.push_back({s, 1.0});
  return MixedStrategy(std::move(support));
}

VectorXd MixedStrategy::marginals(int n) const {
  VectorXd m = VectorXd::Zero(n);
  for (const auto& ws : support_)
    for (int i : ws.set) m[i] += ws.weight;
  return m;
}

bool MixedStrategy::valid_for(const Constraint& c) const {
  double total = 0.0;
  for (const auto& ws : support_) {
    if (ws.weight < 0.0 || !c.independent(ws.set)) return false;
    total += ws.weight;
  }
  return std::abs(total - 1.0) <= 1e-9;
}

ItemSet MixedStrategy::sample(Rng& rng) const {
  double u = rng.uniform();
  for (const auto& ws : support_) {
    if (u < ws.weight) return ws.set;
    u -= ws.weight;
  }
  return support_.back().set;
}

std::vector<WeightedSet> decompose(const VectorXd& x, const Constraint& c) {
  if (!c.has_closed_form_polytope())
    throw UnsupportedError("decompose: oracle matroids need an explicit convex combination");
  const auto inside = c.in_polytope(x);
  if (!inside || !*inside) throw InputError("swap rounding: point outside the matroid polytope");
  const int n = c.ground_size();
  const auto& part_of = c.parts();
  const auto& capacity = c.capacities();

  // Clip tolerance-level overshoot so no part can produce capacity + 1 points.
  VectorXd y = x.cwiseMax(0.0).cwiseMin(1.0);
  std::vector<double> load(capacity.size(), 0.0);
  for (int i = 0; i < n; ++i) load[static_cast<std::size_t>(part_of[static_cast<std::size_t>(i)])] += y[i];
  for (int i = 0; i < n; ++i) {
    const auto p = static_cast<std::size_t>(part_of[static_cast<std::size_t>(i)]);
    if (load[p] > capacity[p]) y[i] *= capacity[p] / load[p];
  }

  // Interval [start_i, start_i + y_i) on its part's line.
  VectorXd start(n);
  std::vector<double> cursor(capacity.size(), 0.0);
  std::vector<double> breaks{0.0, 1.0};
  for (int i = 0; i < n; ++i) {
    auto& pos = cursor[static_cast<std::size_t>(part_of[static_cast<std::size_t>(i)])];
    start[i] = pos;
    pos += y[i];
    if (y[i] > 0.0) {
      breaks.push_back(start[i] - std::floor(start[i]));
      breaks.push_back(pos - std::floor(pos));
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<WeightedSet> out;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double width = breaks[b + 1] - breaks[b];
    if (width <= 0.0) continue;
    const double t = 0.5 * (breaks[b] + breaks[b + 1]);
    ItemSet s;
    for (int i = 0; i < n; ++i) {
      if (y[i] <= 0.0) continue;
      // First point t + j at or after the interval start.
      const double point = t + std::ceil(start[i] - t);
      if (point < start[i] + y[i]) s.push_back(i);
    }
    out.push_back({std::move(s), width});
  }
  return out;
}

namespace {

// Matroid M restricted to rank r with r extra free elements n..n+r-1; every
// independent set of M padded with dummies is a base here.
class PaddedMatroid {
 public:
  explicit PaddedMatroid(const Constraint& c) : c_(c), n_(c.ground_size()), r_(c.rank()) {}

  ItemSet pad(ItemSet s) const {
    for (int d = 0; static_cast<int>(s.size()) < r_; ++d) s.push_back(n_ + d);
    return s;  // real items first, then dummies: still sorted
  }

  ItemSet strip(const ItemSet& s) const {
    ItemSet out;
    for (int i : s)
      if (i < n_) out.push_back(i);
    return out;
  }

  bool is_base(const ItemSet& s) const {
    return static_cast<int>(s.size()) == r_ && c_.independent(strip(s));
  }

 private:
  const Constraint& c_;
  int n_;
  int r_;
};

ItemSet swap_out(const ItemSet& s, int out, int in) { return with_item(without_item(s, out), in); }

// Merge two bases so each element's inclusion probability is the weighted mean.
ItemSet merge_bases(double w1, ItemSet b1, double w2, ItemSet b2, const PaddedMatroid& m,
                    Rng& rng) {
  while (true) {
    int i = -1;
    for (int e : b1)
      if (!contains(b2, e)) {
        i = e;
        break;
      }
    if (i < 0) return b1;
    int j = -1;
    for (int e : b2) {
      if (contains(b1, e)) continue;
      if (m.is_base(swap_out(b1, i, e)) && m.is_base(swap_out(b2, e, i))) {
        j = e;
        break;
      }
    }
    if (j < 0) throw Error("swap rounding: no symmetric exchange (constraint is not a matroid)");
    if (rng.uniform() * (w1 + w2) < w1) {
      b2 = swap_out(b2, j, i);
    } else {
      b1 = swap_out(b1, i, j);
    }
  }
}

}  // namespace

ItemSet swap_round(const std::vector<WeightedSet>& combination, const Constraint& c,
                   std::uint64_t seed) {
  if (combination.empty()) throw InputError("swap rounding: empty combination");
  PaddedMatroid m(c);
  Rng rng(seed);
  double acc_weight = 0.0;
  ItemSet acc;
  for (const auto& ws : combination) {
    if (ws.weight < 0.0) throw InputError("swap rounding: negative weight");
    if (!c.independent(ws.set)) throw InputError("swap rounding: combination member not independent");
    if (ws.weight == 0.0) continue;
    ItemSet base = m.pad(ws.set);
    if (acc_weight == 0.0) {
      acc = std::move(base);
    } else {
      acc = merge_bases(acc_weight, std::move(acc), ws.weight, std::move(base), m, rng);
    }
    acc_weight += ws.weight;
  }
  if (acc_weight == 0.0) throw InputError("swap rounding: combination has zero mass");
  return m.strip(acc);
}

ItemSet swap_round(const VectorXd& x, const Constraint& c, std::uint64_t seed) {
  return swap_round(decompose(x, c), c, seed);
}

}  // namespace robsub
