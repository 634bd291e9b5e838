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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace robsub {

inline constexpr const char* kVersion = "0.3.0";

// Error hierarchy. Every failure surfaced by the library derives from Error so
// callers (the CLI in particular) can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ParameterError : public Error {
 public:
  using Error::Error;
};
class InputError : public Error {
 public:
  using Error::Error;
};
class SizeError : public Error {
 public:
  using Error::Error;
};
class BudgetError : public Error {
 public:
  using Error::Error;
};
class ProtocolError : public Error {
 public:
  using Error::Error;
};
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Sets of ground-set items / graph nodes are sorted vectors of dense ids.
using ItemSet = std::vector<int>;
using ItemSpan = std::span<const int>;

inline ItemSet normalized(ItemSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline bool contains(ItemSpan s, int item) {
  return std::binary_search(s.begin(), s.end(), item);
}

inline ItemSet with_item(ItemSpan s, int item) {
  ItemSet out(s.begin(), s.end());
  out.insert(std::upper_bound(out.begin(), out.end(), item), item);
  return out;
}

inline ItemSet without_item(ItemSpan s, int item) {
  ItemSet out;
  out.reserve(s.size());
  for (int v : s)
    if (v != item) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------------------
// Seeding. All randomness is derived from explicit 64-bit seeds; nothing reads
// the wall clock.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Independent child stream `stream` of `base`.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                    std::uint64_t b) {
  return derive_seed(derive_seed(base, a), b);
}

// 53-bit uniform in [0, 1).
constexpr double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double uniform() { return unit_from_bits(engine_()); }
  bool bernoulli(double p) { return uniform() < p; }

  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw ParameterError("Rng::below: empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % n;
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Thread pool knob. Work split with parallel_for is index-addressed, so results
// never depend on the thread count.

void set_thread_count(int threads);
int thread_count();

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// Sum with a fixed pairwise tree so reductions are order-independent.
double pairwise_sum(std::span<const double> values);

// Sum over i < count of the vector that body(i, acc) adds into acc (length
// dim). Work is cut into fixed blocks and block totals are combined pairwise,
// so the result does not depend on the thread count.
VectorXd blocked_sum(std::size_t count, Eigen::Index dim,
                     const std::function<void(std::size_t, VectorXd&)>& body);

}  // namespace robsub
