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

#include "robsub/matroid.hpp"
#include "robsub/set_objective.hpp"

namespace robsub {

enum class GreedyVariant { plain, lazy };

// Adds the feasible item of largest marginal gain until none remains; ties go
// to the lowest id. The lazy variant keeps stale upper bounds in a heap and
// returns the same set whenever the gains are submodular. Throws
// ParameterError for objectives not declared monotone.
ItemSet greedy_maximize(const SetObjective& f, const Constraint& c, SampleSpec spec = {},
                        GreedyVariant variant = GreedyVariant::plain);

struct OptResult {
  ItemSet set;
  double value = 0.0;
};

inline constexpr std::size_t kExhaustiveCap = 1'000'000;

// Feasible sets in lexicographic order. Monotone callers only need bases
// (maximal independent sets), which is what `bases_only` yields. Throws
// SizeError once more than `cap` sets would be produced.
std::vector<ItemSet> enumerate_independent_sets(const Constraint& c, bool bases_only,
                                                std::size_t cap = kExhaustiveCap);

// Exact maximizer by enumeration, evaluated with the exact form when the
// objective has one. Among equal values the lexicographically first wins.
OptResult exhaustive_opt(const SetObjective& f, const Constraint& c,
                         std::size_t cap = kExhaustiveCap);

}  // namespace robsub
