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

#include <cmath>
#include <limits>

#include "robsub/common.hpp"

namespace robsub {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class LpStatus { optimal, unbounded, iteration_limit };

template <typename Scalar>
struct LpResult {
  LpStatus status = LpStatus::optimal;
  Scalar objective = 0;
  Vec<Scalar> x;     // primal
  Vec<Scalar> dual;  // one per constraint, >= 0
  int pivots = 0;
};

// max c'x  s.t.  A x <= b, x >= 0, with b >= 0 so the slack basis is feasible.
// Dense tableau; Dantzig pricing, switching to Bland's rule after a run of
// degenerate pivots to rule out cycling.
template <typename Scalar>
LpResult<Scalar> solve_lp_feasible_origin(const Mat<Scalar>& A, const Vec<Scalar>& b,
                                          const Vec<Scalar>& c, int max_pivots = 100000) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (b.size() != m || c.size() != n) throw InputError("lp: dimension mismatch");
  if ((b.array() < Scalar(0)).any()) throw InputError("lp: negative right-hand side");
  const Scalar eps = Scalar(1e-11);

  // Rows 0..m-1 constraints, row m the objective (reduced costs, maximization
  // form: entering column has positive entry). Last column is the rhs.
  Mat<Scalar> t = Mat<Scalar>::Zero(m + 1, n + m + 1);
  t.topLeftCorner(m, n) = A;
  t.block(0, n, m, m).setIdentity();
  t.topRightCorner(m, 1) = b;
  t.bottomLeftCorner(1, n) = c.transpose();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  LpResult<Scalar> out;
  int degenerate_run = 0;
  bool bland = false;
  while (true) {
    Eigen::Index enter = -1;
    Scalar best = eps;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (t(m, j) > best) {
        enter = j;
        if (bland) break;
        best = t(m, j);
      }
    }
    if (enter < 0) break;
    if (out.pivots >= max_pivots) {
      out.status = LpStatus::iteration_limit;
      break;
    }
    Eigen::Index leave = -1;
    Scalar ratio = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (t(i, enter) <= eps) continue;
      const Scalar r = t(i, n + m) / t(i, enter);
      if (r < ratio - eps ||
          (r <= ratio + eps && leave >= 0 &&
           basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        ratio = std::min(ratio, r);
        leave = i;
      }
    }
    if (leave < 0) {
      out.status = LpStatus::unbounded;
      return out;
    }
    degenerate_run = ratio <= eps ? degenerate_run + 1 : 0;
    if (degenerate_run > 50) bland = true;

    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const Scalar f = t(i, enter);
      if (f != Scalar(0)) t.row(i) -= f * t.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
    ++out.pivots;
  }

  out.x = Vec<Scalar>::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[static_cast<std::size_t>(i)] < n) out.x[basis[static_cast<std::size_t>(i)]] = t(i, n + m);
  // Reduced cost of slack i is -y_i.
  out.dual = (-t.block(m, n, 1, m).transpose()).cwiseMax(Scalar(0));
  out.objective = c.dot(out.x);
  return out;
}

template <typename Scalar>
struct MatrixGameSolution {
  Scalar value = 0;
  Vec<Scalar> row_strategy;  // maximizer
  Vec<Scalar> col_strategy;  // minimizer
  int pivots = 0;
};

namespace detail {

// Value and strategies when the row player has at least as many pure
// strategies as the column player: the LP has one constraint per row.
template <typename Scalar>
MatrixGameSolution<Scalar> solve_game_rows(const Mat<Scalar>& payoff) {
  // Shift to strictly positive payoffs; the value shifts by the same amount.
  const Scalar shift = Scalar(1) - payoff.minCoeff();
  const Mat<Scalar> p = payoff.array() + shift;
  // Column player: max 1'z s.t. P z <= 1, z >= 0; value = 1 / sum z.
  const Vec<Scalar> ones_rows = Vec<Scalar>::Ones(p.rows());
  const Vec<Scalar> ones_cols = Vec<Scalar>::Ones(p.cols());
  const auto lp = solve_lp_feasible_origin<Scalar>(p, ones_rows, ones_cols);
  if (lp.status != LpStatus::optimal) throw Error("matrix game: LP did not reach optimality");
  const Scalar total = lp.x.sum();
  MatrixGameSolution<Scalar> sol;
  sol.value = Scalar(1) / total - shift;
  sol.col_strategy = lp.x / total;
  sol.row_strategy = lp.dual / lp.dual.sum();
  sol.pivots = lp.pivots;
  return sol;
}

}  // namespace detail

// Zero-sum game, payoff[i][j] paid to the row (maximizing) player. The LP is
// oriented so its constraint count is min(rows, cols).
template <typename Scalar>
MatrixGameSolution<Scalar> solve_matrix_game(const Mat<Scalar>& payoff) {
  if (payoff.rows() == 0 || payoff.cols() == 0) throw InputError("matrix game: empty payoff");
  if (!payoff.allFinite()) throw InputError("matrix game: non-finite payoff");
  if (payoff.rows() <= payoff.cols()) return detail::solve_game_rows<Scalar>(payoff);
  // Swap roles: the column player maximizes -A'.
  const Mat<Scalar> flipped = -payoff.transpose();
  auto s = detail::solve_game_rows<Scalar>(flipped);
  MatrixGameSolution<Scalar> sol;
  sol.value = -s.value;
  sol.row_strategy = s.col_strategy;
  sol.col_strategy = s.row_strategy;
  sol.pivots = s.pivots;
  return sol;
}

}  // namespace robsub
