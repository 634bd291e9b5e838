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

#include "robsub/matroid.hpp"

#include <numeric>

namespace robsub {

Constraint Constraint::cardinality(int n, int k) {
  if (n < 0) throw ParameterError("cardinality: negative ground set");
  if (k < 0) throw ParameterError("cardinality: negative k");
  Constraint c;
  c.n_ = n;
  c.rank_ = std::min(n, k);
  c.kind_ = Uniform{k};
  c.part_view_.assign(static_cast<std::size_t>(n), 0);
  c.capacity_view_ = {k};
  return c;
}

Constraint Constraint::partition(std::vector<int> part_of, std::vector<int> capacity) {
  Constraint c;
  c.n_ = static_cast<int>(part_of.size());
  std::vector<int> sizes(capacity.size(), 0);
  for (int p : part_of) {
    if (p < 0 || static_cast<std::size_t>(p) >= capacity.size())
      throw ParameterError("partition: part id out of range");
    ++sizes[static_cast<std::size_t>(p)];
  }
  for (std::size_t p = 0; p < capacity.size(); ++p) {
    if (capacity[p] < 0) throw ParameterError("partition: negative capacity");
    c.rank_ += std::min(capacity[p], sizes[p]);
  }
  c.part_view_ = part_of;
  c.capacity_view_ = capacity;
  c.kind_ = Partition{std::move(part_of), std::move(capacity)};
  return c;
}

Constraint Constraint::from_oracle(int n, IndependenceOracle independent) {
  if (!independent) throw ParameterError("matroid: empty independence oracle");
  if (!independent(ItemSet{})) throw ParameterError("matroid: empty set must be independent");
  Constraint c;
  c.n_ = n;
  c.kind_ = Oracle{std::move(independent)};
  ItemSet all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  c.rank_ = c.rank_of(all);
  return c;
}

bool Constraint::independent(ItemSpan s) const {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= n_) return false;
    if (i > 0 && s[i] <= s[i - 1]) return false;
  }
  return std::visit(
      [&](const auto& k) -> bool {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Uniform>) {
          return static_cast<int>(s.size()) <= k.k;
        } else if constexpr (std::is_same_v<K, Partition>) {
          std::vector<int> used(k.capacity.size(), 0);
          for (int i : s)
            if (++used[static_cast<std::size_t>(k.part_of[static_cast<std::size_t>(i)])] >
                k.capacity[static_cast<std::size_t>(k.part_of[static_cast<std::size_t>(i)])])
              return false;
          return true;
        } else {
          return k.independent(s);
        }
      },
      kind_);
}

bool Constraint::can_add(ItemSpan s, int item) const {
  if (item < 0 || item >= n_ || contains(s, item)) return false;
  if (const auto* u = std::get_if<Uniform>(&kind_)) return static_cast<int>(s.size()) < u->k;
  if (const auto* p = std::get_if<Partition>(&kind_)) {
    const int part = p->part_of[static_cast<std::size_t>(item)];
    int used = 0;
    for (int i : s)
      if (p->part_of[static_cast<std::size_t>(i)] == part) ++used;
    return used < p->capacity[static_cast<std::size_t>(part)];
  }
  return independent(with_item(s, item));
}

int Constraint::rank_of(ItemSpan s) const {
  ItemSet basis;
  for (int i : s)
    if (can_add(basis, i)) basis = with_item(basis, i);
  return static_cast<int>(basis.size());
}

ItemSet Constraint::max_weight_independent(const VectorXd& weights) const {
  if (weights.size() != n_) throw InputError("linear optimization: weight vector length mismatch");
  std::vector<int> order(static_cast<std::size_t>(n_));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return weights[a] > weights[b]; });
  ItemSet chosen;
  for (int i : order) {
    if (!(weights[i] > 0.0)) break;
    if (static_cast<int>(chosen.size()) == rank_) break;
    if (can_add(chosen, i)) chosen = with_item(chosen, i);
  }
  return chosen;
}

std::optional<bool> Constraint::in_polytope(const VectorXd& x, double tol) const {
  if (x.size() != n_) return false;
  if ((x.array() < -tol).any() || (x.array() > 1.0 + tol).any()) return false;
  if (const auto* u = std::get_if<Uniform>(&kind_)) return x.sum() <= u->k + tol;
  if (const auto* p = std::get_if<Partition>(&kind_)) {
    std::vector<double> load(p->capacity.size(), 0.0);
    for (int i = 0; i < n_; ++i) load[static_cast<std::size_t>(p->part_of[static_cast<std::size_t>(i)])] += x[i];
    for (std::size_t q = 0; q < load.size(); ++q)
      if (load[q] > p->capacity[q] + tol) return false;
    return true;
  }
  if (n_ > 16) return std::nullopt;
  for (std::uint32_t mask = 1; mask < (1u << n_); ++mask) {
    ItemSet subset;
    double mass = 0.0;
    for (int i = 0; i < n_; ++i)
      if (mask & (1u << i)) {
        subset.push_back(i);
        mass += x[i];
      }
    if (mass > rank_of(subset) + tol) return false;
  }
  return true;
}

const std::vector<int>& Constraint::parts() const {
  if (std::holds_alternative<Oracle>(kind_))
    throw UnsupportedError("oracle matroid has no partition structure");
  return part_view_;
}

const std::vector<int>& Constraint::capacities() const {
  if (std::holds_alternative<Oracle>(kind_))
    throw UnsupportedError("oracle matroid has no partition structure");
  return capacity_view_;
}

bool check_small_matroid(const Constraint& c) {
  const int n = c.ground_size();
  if (n > 12) throw SizeError("check_small_matroid: n > 12");
  auto to_set = [n](std::uint32_t mask) {
    ItemSet s;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    return s;
  };
  const std::uint32_t full = 1u << n;
  std::vector<char> indep(full);
  for (std::uint32_t m = 0; m < full; ++m) indep[m] = c.independent(to_set(m));
  if (!indep[0]) return false;
  for (std::uint32_t m = 0; m < full; ++m) {
    if (!indep[m]) continue;
    for (int i = 0; i < n; ++i)
      if ((m & (1u << i)) && !indep[m & ~(1u << i)]) return false;  // downward closed
  }
  for (std::uint32_t a = 0; a < full; ++a) {
    if (!indep[a]) continue;
    for (std::uint32_t b = 0; b < full; ++b) {
      if (!indep[b] || std::popcount(b) <= std::popcount(a)) continue;
      bool augmented = false;
      for (int i = 0; i < n && !augmented; ++i)
        if ((b & (1u << i)) && !(a & (1u << i)) && indep[a | (1u << i)]) augmented = true;
      if (!augmented) return false;
    }
  }
  return true;
}

}  // namespace robsub
