/*
 * Copyright 2026 The cpinterp Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */

// Exact feasibility oracle for { x >= 0 : A x = b } in rational arithmetic.
// A nonempty polyhedron of this form has a basic feasible point, so after
// removing dependent rows it suffices to try every column basis.

#pragma once

#include <gmpxx.h>

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "cpinterp/feasibility.hpp"

namespace cpinterp::testkit {

using RationalMatrix = std::vector<std::vector<mpq_class>>;

namespace oracle_detail {

// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<size_t> rref(RationalMatrix &m, size_t cols) {
  std::vector<size_t> pivots;
  size_t row = 0;
  for (size_t c = 0; c < cols && row < m.size(); ++c) {
    size_t sel = row;
    while (sel < m.size() && m[sel][c] == 0)
      ++sel;
    if (sel == m.size())
      continue;
    std::swap(m[row], m[sel]);
    const mpq_class piv = m[row][c];
    for (auto &x : m[row])
      x /= piv;
    for (size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0)
        continue;
      const mpq_class f = m[r][c];
      for (size_t j = 0; j < m[r].size(); ++j)
        m[r][j] -= f * m[row][j];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

// Solves the square system A_S x = b, or nullopt when A_S is singular.
inline std::optional<std::vector<mpq_class>>
solve_basis(const RationalMatrix &a, const std::vector<mpq_class> &b,
            const std::vector<size_t> &cols) {
  const size_t r = cols.size();
  RationalMatrix m(r, std::vector<mpq_class>(r + 1));
  for (size_t i = 0; i < r; ++i) {
    for (size_t j = 0; j < r; ++j)
      m[i][j] = a[i][cols[j]];
    m[i][r] = b[i];
  }
  if (rref(m, r).size() != r)
    return std::nullopt;
  std::vector<mpq_class> x(r);
  for (size_t i = 0; i < r; ++i)
    x[i] = m[i][r];
  return x;
}

} // namespace oracle_detail

inline bool rational_feasible(RationalMatrix a, std::vector<mpq_class> b) {
  using namespace oracle_detail;
  const size_t vars = a.empty() ? 0 : a.front().size();
  RationalMatrix aug = a;
  for (size_t i = 0; i < aug.size(); ++i)
    aug[i].push_back(b[i]);
  const std::vector<size_t> piv = rref(aug, vars + 1);
  if (!piv.empty() && piv.back() == vars)
    return false; // inconsistent even without sign constraints
  const size_t rank = piv.size();
  if (rank == 0)
    return true;
  RationalMatrix ar(rank, std::vector<mpq_class>(vars));
  std::vector<mpq_class> br(rank);
  for (size_t i = 0; i < rank; ++i) {
    for (size_t j = 0; j < vars; ++j)
      ar[i][j] = aug[i][j];
    br[i] = aug[i][vars];
  }

  // Every rank-sized column subset, in lexicographic order.
  std::vector<size_t> cols(rank);
  for (size_t i = 0; i < rank; ++i)
    cols[i] = i;
  for (;;) {
    if (auto x = solve_basis(ar, br, cols)) {
      bool nonneg = true;
      for (const auto &v : *x)
        nonneg = nonneg && v >= 0;
      if (nonneg)
        return true;
    }
    size_t i = rank;
    while (i > 0 && cols[i - 1] == vars - rank + i - 1)
      --i;
    if (i == 0)
      return false;
    ++cols[i - 1];
    for (size_t j = i; j < rank; ++j)
      cols[j] = cols[j - 1] + 1;
  }
}

// Exact verdict for b_table = a_table * D with D in class `cls`. Entries must
// be exactly representable (mpq_class converts doubles without rounding).
inline bool rational_class_feasible(const Eigen::MatrixXd &a_table,
                                    const Eigen::MatrixXd &b_table,
                                    StochasticClass cls) {
  const size_t k = static_cast<size_t>(a_table.rows());
  const size_t n = static_cast<size_t>(a_table.cols());
  const size_t m = static_cast<size_t>(b_table.cols());
  if (cls == StochasticClass::DoublyStochastic && n != m)
    return false;
  RationalMatrix a;
  std::vector<mpq_class> b;
  auto var = [&](size_t p, size_t q) { return p * m + q; };
  for (size_t i = 0; i < k; ++i) {
    for (size_t q = 0; q < m; ++q) {
      std::vector<mpq_class> row(n * m, 0);
      for (size_t p = 0; p < n; ++p)
        row[var(p, q)] = mpq_class(a_table(Eigen::Index(i), Eigen::Index(p)));
      a.push_back(row);
      b.emplace_back(b_table(Eigen::Index(i), Eigen::Index(q)));
    }
  }
  if (needs_column_sums(cls)) {
    for (size_t q = 0; q < m; ++q) {
      std::vector<mpq_class> row(n * m, 0);
      for (size_t p = 0; p < n; ++p)
        row[var(p, q)] = 1;
      a.push_back(row);
      b.emplace_back(1);
    }
  }
  if (needs_row_sums(cls)) {
    for (size_t p = 0; p < n; ++p) {
      std::vector<mpq_class> row(n * m, 0);
      for (size_t q = 0; q < m; ++q)
        row[var(p, q)] = 1;
      a.push_back(row);
      b.emplace_back(1);
    }
  }
  if (!needs_row_sums(cls)) {
    // Columns decouple: solve each one on its own n variables.
    for (size_t q = 0; q < m; ++q) {
      RationalMatrix aq;
      std::vector<mpq_class> bq;
      for (size_t r = 0; r < a.size(); ++r) {
        bool touches = false;
        std::vector<mpq_class> row(n);
        for (size_t p = 0; p < n; ++p) {
          row[p] = a[r][var(p, q)];
          touches = touches || row[p] != 0;
        }
        const bool own = touches || (r < k * m && r % m == q);
        if (own) {
          aq.push_back(row);
          bq.push_back(b[r]);
        }
      }
      if (!rational_feasible(aq, bq))
        return false;
    }
    return true;
  }
  return rational_feasible(a, b);
}

} // namespace cpinterp::testkit
