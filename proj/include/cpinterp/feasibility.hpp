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

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "cpinterp/errors.hpp"
#include "cpinterp/simplex.hpp"

namespace cpinterp {

// Stochastic class of a transfer matrix D, i.e. the class of interpolating
// map it encodes: any CP map, unital, trace preserving, or both.
enum class StochasticClass {
  Nonnegative,
  ColumnStochastic,
  RowStochastic,
  DoublyStochastic,
};

inline constexpr std::array<StochasticClass, 4> kAllClasses = {
    StochasticClass::Nonnegative, StochasticClass::ColumnStochastic,
    StochasticClass::RowStochastic, StochasticClass::DoublyStochastic};

// Short names used on the command line and in reports.
inline const char *class_key(StochasticClass c) {
  switch (c) {
  case StochasticClass::Nonnegative:
    return "cp";
  case StochasticClass::ColumnStochastic:
    return "unital";
  case StochasticClass::RowStochastic:
    return "tp";
  case StochasticClass::DoublyStochastic:
    return "utp";
  }
  return "?";
}

inline const char *class_name(StochasticClass c) {
  switch (c) {
  case StochasticClass::Nonnegative:
    return "NONNEGATIVE";
  case StochasticClass::ColumnStochastic:
    return "COLUMN_STOCHASTIC";
  case StochasticClass::RowStochastic:
    return "ROW_STOCHASTIC";
  case StochasticClass::DoublyStochastic:
    return "DOUBLY_STOCHASTIC";
  }
  return "?";
}

inline std::optional<StochasticClass> parse_class(std::string_view s) {
  for (StochasticClass c : kAllClasses) {
    if (s == class_key(c) || s == class_name(c))
      return c;
  }
  return std::nullopt;
}

inline bool needs_column_sums(StochasticClass c) {
  return c == StochasticClass::ColumnStochastic ||
         c == StochasticClass::DoublyStochastic;
}

inline bool needs_row_sums(StochasticClass c) {
  return c == StochasticClass::RowStochastic ||
         c == StochasticClass::DoublyStochastic;
}

//============================================================================
// TransferMatrix
//============================================================================

struct TransferMatrix {
  Eigen::MatrixXd entries; // n x m, nonnegative
  StochasticClass cls = StochasticClass::Nonnegative;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

// Largest violation of nonnegativity and of the class's sum constraints.
inline double class_violation(const Eigen::MatrixXd &d, StochasticClass c) {
  double worst = 0.0;
  if (d.size() > 0)
    worst = std::max(worst, -d.minCoeff());
  if (needs_column_sums(c) && d.size() > 0)
    worst = std::max(worst,
                     (d.colwise().sum().array() - 1.0).abs().maxCoeff());
  if (needs_row_sums(c) && d.size() > 0)
    worst = std::max(worst,
                     (d.rowwise().sum().array() - 1.0).abs().maxCoeff());
  return worst;
}

inline bool satisfies_class(const Eigen::MatrixXd &d, StochasticClass c,
                            double sum_tol = 1e-9) {
  if (d.size() > 0 && d.minCoeff() < -1e-12)
    return false;
  return class_violation(d, c) <= sum_tol;
}

//============================================================================
// FeasibilitySystem
//============================================================================

// (b_ij) = (a_ij) D with D in the requested class.
struct FeasibilitySystem {
  Eigen::MatrixXd a_table; // k x n
  Eigen::MatrixXd b_table; // k x m
  StochasticClass cls = StochasticClass::Nonnegative;

  Eigen::Index k() const { return a_table.rows(); }
  Eigen::Index n() const { return a_table.cols(); }
  Eigen::Index m() const { return b_table.cols(); }

  void validate() const {
    if (a_table.rows() != b_table.rows())
      throw InputError("a_table and b_table have different family sizes");
    if (n() == 0 || m() == 0)
      throw InputError("transfer matrix dimensions must be positive");
    if (!a_table.allFinite() || !b_table.allFinite())
      throw InputError("spectrum tables contain non-finite entries");
  }

  // feas_tol scaled by max(1, ||a||_max, ||b||_max).
  double scaled_tol(double base) const {
    double s = 1.0;
    if (a_table.size() > 0)
      s = std::max(s, a_table.cwiseAbs().maxCoeff());
    if (b_table.size() > 0)
      s = std::max(s, b_table.cwiseAbs().maxCoeff());
    return base * s;
  }
};

struct FeasibilityResult {
  Verdict verdict = Verdict::Infeasible;
  std::optional<TransferMatrix> witness;
  double phase1_objective = 0.0; // worst (columnwise) or total phase-1 optimum
  double residual = 0.0;         // ||b - a D||_max of the witness
  double tolerance = 0.0;        // the scaled feas_tol that was applied
  std::optional<Eigen::Index> failing_column;
  std::string method;

  bool feasible() const { return verdict == Verdict::Feasible; }
};

namespace detail {

inline void clamp_and_measure(const FeasibilitySystem &sys,
                              FeasibilityResult &res) {
  if (!res.witness)
    return;
  Eigen::MatrixXd &d = res.witness->entries;
  d = d.cwiseMax(0.0);
  res.residual = sys.k() == 0
                     ? 0.0
                     : (sys.b_table - sys.a_table * d).cwiseAbs().maxCoeff();
}

inline FeasibilityResult uniform_solution(const FeasibilitySystem &sys,
                                          double tol) {
  FeasibilityResult res;
  res.method = "uniform";
  res.tolerance = tol;
  const Eigen::Index n = sys.n(), m = sys.m();
  if (sys.cls == StochasticClass::DoublyStochastic && n != m) {
    res.verdict = Verdict::Infeasible;
    return res;
  }
  const double v = sys.cls == StochasticClass::RowStochastic
                       ? 1.0 / static_cast<double>(m)
                       : 1.0 / static_cast<double>(n);
  res.witness = TransferMatrix{Eigen::MatrixXd::Constant(n, m, v), sys.cls};
  res.verdict = Verdict::Feasible;
  return res;
}

} // namespace detail

// Solves the m column polyhedra
//   P_q = { d >= 0 : a_table d = b_table.col(q) [, sum d = 1] }
// independently. Each column is a vertex of P_q and so has at most k + 1
// nonzero entries (k for NONNEGATIVE). Any empty P_q makes the whole system
// infeasible; the first such q is reported.
inline FeasibilityResult find_columnwise(const FeasibilitySystem &sys,
                                         double feas_tol = 1e-8) {
  sys.validate();
  if (needs_row_sums(sys.cls))
    throw InputError("find_columnwise: row constraints do not decouple by "
                     "columns");
  const double tol = sys.scaled_tol(feas_tol);
  if (sys.k() == 0)
    return detail::uniform_solution(sys, tol);

  const Eigen::Index k = sys.k(), n = sys.n(), m = sys.m();
  const bool stochastic = sys.cls == StochasticClass::ColumnStochastic;
  Eigen::MatrixXd lhs(k + (stochastic ? 1 : 0), n);
  lhs.topRows(k) = sys.a_table;
  if (stochastic)
    lhs.row(k).setOnes();
  const Eigen::VectorXd lower = Eigen::VectorXd::Zero(n);

  FeasibilityResult res;
  res.method = "lp-columnwise";
  res.tolerance = tol;
  res.verdict = Verdict::Feasible;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, m);
  for (Eigen::Index q = 0; q < m; ++q) {
    Eigen::VectorXd rhs(lhs.rows());
    rhs.head(k) = sys.b_table.col(q);
    if (stochastic)
      rhs(k) = 1.0;
    const Phase1Result col = phase1_simplex(lhs, rhs, lower, tol);
    res.phase1_objective = std::max(res.phase1_objective, col.objective);
    if (col.verdict == Verdict::Infeasible) {
      res.verdict = Verdict::Infeasible;
      res.failing_column = q;
      return res;
    }
    if (col.verdict == Verdict::Marginal && res.verdict == Verdict::Feasible) {
      res.verdict = Verdict::Marginal;
      res.failing_column = q;
    }
    d.col(q) = col.x;
  }
  res.witness = TransferMatrix{std::move(d), sys.cls};
  detail::clamp_and_measure(sys, res);
  return res;
}

// Full phase-1 LP on the n*m entries of D. Used for ROW_STOCHASTIC and
// DOUBLY_STOCHASTIC, whose row-sum constraints couple the columns.
inline FeasibilityResult find_full(const FeasibilitySystem &sys,
                                   double feas_tol = 1e-8) {
  sys.validate();
  const double tol = sys.scaled_tol(feas_tol);
  if (sys.k() == 0)
    return detail::uniform_solution(sys, tol);

  const Eigen::Index k = sys.k(), n = sys.n(), m = sys.m();
  const Eigen::Index vars = n * m; // d_pq at p * m + q
  Eigen::Index rows = k * m;
  if (needs_row_sums(sys.cls))
    rows += n;
  if (needs_column_sums(sys.cls))
    rows += m;

  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(rows, vars);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index q = 0; q < m; ++q, ++r) {
      for (Eigen::Index p = 0; p < n; ++p)
        lhs(r, p * m + q) = sys.a_table(i, p);
      rhs(r) = sys.b_table(i, q);
    }
  }
  if (needs_row_sums(sys.cls)) {
    for (Eigen::Index p = 0; p < n; ++p, ++r) {
      lhs.row(r).segment(p * m, m).setOnes();
      rhs(r) = 1.0;
    }
  }
  if (needs_column_sums(sys.cls)) {
    for (Eigen::Index q = 0; q < m; ++q, ++r) {
      for (Eigen::Index p = 0; p < n; ++p)
        lhs(r, p * m + q) = 1.0;
      rhs(r) = 1.0;
    }
  }

  const Phase1Result lp =
      phase1_simplex(lhs, rhs, Eigen::VectorXd::Zero(vars), tol);
  FeasibilityResult res;
  res.method = "lp-full";
  res.tolerance = tol;
  res.verdict = lp.verdict;
  res.phase1_objective = lp.objective;
  if (lp.verdict != Verdict::Infeasible) {
    Eigen::MatrixXd d(n, m);
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = 0; q < m; ++q)
        d(p, q) = lp.x(p * m + q);
    res.witness = TransferMatrix{std::move(d), sys.cls};
    detail::clamp_and_measure(sys, res);
  }
  return res;
}

// Decides whether a nonnegative D of the requested class solves the system,
// returning a vertex solution when it does. Column-decoupled classes use
// find_columnwise; the rest use the full LP.
inline FeasibilityResult find_transfer_matrix(const FeasibilitySystem &sys,
                                              double feas_tol = 1e-8) {
  if (needs_row_sums(sys.cls))
    return find_full(sys, feas_tol);
  return find_columnwise(sys, feas_tol);
}

} // namespace cpinterp
