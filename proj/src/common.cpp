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

#include "robsub/common.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace robsub {

namespace {
std::atomic<int> g_threads{1};
// Nested parallel_for calls run inline on the worker that issued them.
thread_local bool t_in_worker = false;
}

void set_thread_count(int threads) { g_threads = std::max(1, threads); }

int thread_count() { return g_threads.load(); }

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body) {
  const auto threads =
      std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count);
  if (threads <= 1 || t_in_worker) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      t_in_worker = true;
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

VectorXd blocked_sum(std::size_t count, Eigen::Index dim,
                     const std::function<void(std::size_t, VectorXd&)>& body) {
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<VectorXd> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    VectorXd acc = VectorXd::Zero(dim);
    const std::size_t end = std::min(count, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) body(i, acc);
    partial[b] = std::move(acc);
  });
  while (partial.size() > 1) {
    std::vector<VectorXd> next((partial.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = 2 * i + 1 < partial.size() ? VectorXd(partial[2 * i] + partial[2 * i + 1])
                                           : std::move(partial[2 * i]);
    partial = std::move(next);
  }
  return partial.empty() ? VectorXd::Zero(dim) : partial.front();
}

}  // namespace robsub
