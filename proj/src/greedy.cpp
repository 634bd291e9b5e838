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

#include "robsub/greedy.hpp"

#include <queue>

namespace robsub {

namespace {

ItemSet plain_greedy(IncrementalEvaluator& eval, const Constraint& c) {
  const int n = c.ground_size();
  while (true) {
    int best = -1;
    double best_gain = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!c.can_add(eval.current(), i)) continue;
      const double g = eval.gain(i);
      if (best < 0 || g > best_gain) {
        best = i;
        best_gain = g;
      }
    }
    if (best < 0) break;
    eval.add(best);
  }
  return eval.current();
}

struct Bound {
  double gain;
  int item;
  // Max-heap on gain, then lowest id.
  bool operator<(const Bound& o) const {
    if (gain != o.gain) return gain < o.gain;
    return item > o.item;
  }
};

ItemSet lazy_greedy(IncrementalEvaluator& eval, const Constraint& c) {
  const int n = c.ground_size();
  std::priority_queue<Bound> heap;
  for (int i = 0; i < n; ++i)
    if (c.can_add(eval.current(), i)) heap.push({eval.gain(i), i});
  std::vector<int> fresh_round(static_cast<std::size_t>(n), 0);
  int round = 0;
  while (!heap.empty()) {
    Bound top = heap.top();
    heap.pop();
    if (!c.can_add(eval.current(), top.item)) continue;  // matroid: stays infeasible
    if (fresh_round[static_cast<std::size_t>(top.item)] == round) {
      // Fresh gain that still beats every stale bound under the heap order.
      eval.add(top.item);
      ++round;
      continue;
    }
    top.gain = eval.gain(top.item);
    fresh_round[static_cast<std::size_t>(top.item)] = round;
    heap.push(top);
  }
  return eval.current();
}

}  // namespace

ItemSet greedy_maximize(const SetObjective& f, const Constraint& c, SampleSpec spec,
                        GreedyVariant variant) {
  if (!f.monotone()) throw ParameterError("greedy: objective is not declared monotone");
  if (f.ground_size() != c.ground_size())
    throw InputError("greedy: objective and constraint disagree on ground set");
  auto eval = f.incremental(spec);
  return variant == GreedyVariant::lazy ? lazy_greedy(*eval, c) : plain_greedy(*eval, c);
}

std::vector<ItemSet> enumerate_independent_sets(const Constraint& c, bool bases_only,
                                                std::size_t cap) {
  const int n = c.ground_size();
  const int rank = c.rank();
  std::vector<ItemSet> out;
  ItemSet current;
  auto emit = [&] {
    if (out.size() >= cap) throw SizeError("enumeration exceeds the feasible-set cap");
    out.push_back(current);
  };
  auto visit = [&](auto&& self, int start) -> void {
    if (!bases_only || static_cast<int>(current.size()) == rank) emit();
    if (static_cast<int>(current.size()) == rank) return;
    for (int i = start; i < n; ++i) {
      if (bases_only && static_cast<int>(current.size()) + (n - i) < rank) return;
      if (!c.can_add(current, i)) continue;
      current.push_back(i);
      self(self, i + 1);
      current.pop_back();
    }
  };
  visit(visit, 0);
  return out;
}

OptResult exhaustive_opt(const SetObjective& f, const Constraint& c, std::size_t cap) {
  const auto sets = enumerate_independent_sets(c, f.monotone(), cap);
  std::vector<double> values(sets.size());
  parallel_for(sets.size(), [&](std::size_t i) { values[i] = exact_or_estimate(f, sets[i]); });
  OptResult best;
  bool first = true;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (first || values[i] > best.value) {
      best = {sets[i], values[i]};
      first = false;
    }
  }
  return best;
}

}  // namespace robsub
