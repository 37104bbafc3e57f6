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
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cpinterp/errors.hpp"

namespace cpinterp {

enum class Verdict { Feasible, Infeasible, Marginal };

inline const char *to_string(Verdict v) {
  switch (v) {
  case Verdict::Feasible:
    return "yes";
  case Verdict::Infeasible:
    return "no";
  case Verdict::Marginal:
    return "marginal";
  }
  return "?";
}

struct Phase1Result {
  Verdict verdict = Verdict::Infeasible;
  Eigen::VectorXd x;      // basic solution reached by phase 1 (original vars)
  double objective = 0.0; // phase-1 optimum = ||A x - b||_1
  int iterations = 0;
};

// Dense phase-1 simplex for  A x = b,  x >= lower.
//
// Artificial variables are added on every row (after flipping rows so the
// shifted right-hand side is nonnegative) and their sum is minimized with
// Bland's rule, so the method terminates on degenerate problems. The result is
// a basic solution of the original system. Verdicts:
//   objective <= tol        Feasible
//   objective >  10 * tol   Infeasible
//   otherwise               Marginal
// Throws NumericalError when the iteration cap is hit.
inline Phase1Result phase1_simplex(const Eigen::MatrixXd &a,
                                   const Eigen::VectorXd &b,
                                   const Eigen::VectorXd &lower, double tol,
                                   int max_iterations = 0) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index vars = a.cols();
  if (b.size() != rows || lower.size() != vars)
    throw InputError("phase1_simplex: inconsistent shapes");
  if (!a.allFinite() || !b.allFinite() || !lower.allFinite())
    throw InputError("phase1_simplex: non-finite input");

  Phase1Result result;
  result.x = lower;
  if (rows == 0) {
    result.verdict = Verdict::Feasible;
    return result;
  }

  // Shift x = y + lower, y >= 0.
  Eigen::VectorXd rhs = b - a * lower;

  // Tableau columns: [ y (vars) | artificials (rows) | rhs ].
  const Eigen::Index cols = vars + rows;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows + 1, cols + 1);
  for (Eigen::Index i = 0; i < rows; ++i) {
    // Row equilibration keeps pivot thresholds meaningful.
    double scale = a.row(i).cwiseAbs().maxCoeff();
    scale = std::max(scale, std::abs(rhs(i)));
    if (scale == 0.0)
      scale = 1.0;
    const double sign = rhs(i) < 0.0 ? -1.0 : 1.0;
    t.row(i).head(vars) = sign * a.row(i) / scale;
    t(i, vars + i) = 1.0;
    t(i, cols) = sign * rhs(i) / scale;
  }
  std::vector<Eigen::Index> basis(static_cast<size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i)
    basis[static_cast<size_t>(i)] = vars + i;

  // Objective row holds reduced costs of min sum(artificials).
  for (Eigen::Index i = 0; i < rows; ++i)
    t.row(rows).head(vars) -= t.row(i).head(vars);
  t(rows, cols) = -t.col(cols).head(rows).sum();

  constexpr double kPivotEps = 1e-11;
  constexpr double kCostEps = 1e-12;
  if (max_iterations <= 0)
    max_iterations = static_cast<int>(50 * (rows + cols) + 1000);

  auto pivot = [&](Eigen::Index r, Eigen::Index c) {
    t.row(r) /= t(r, c);
    for (Eigen::Index i = 0; i <= rows; ++i) {
      if (i != r && t(i, c) != 0.0)
        t.row(i) -= t(i, c) * t.row(r);
    }
    t(r, c) = 1.0;
    basis[static_cast<size_t>(r)] = c;
  };

  int it = 0;
  for (;; ++it) {
    if (it >= max_iterations)
      throw NumericalError("phase-1 simplex exceeded its iteration cap",
                           -t(rows, cols));
    // Bland: lowest-index improving column.
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (t(rows, j) < -kCostEps) {
        bool has_pivot = false;
        for (Eigen::Index i = 0; i < rows; ++i) {
          if (t(i, j) > kPivotEps) {
            has_pivot = true;
            break;
          }
        }
        if (has_pivot) {
          enter = j;
          break;
        }
      }
    }
    if (enter < 0)
      break;
    // Ratio test, ties by lowest basic variable index.
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (t(i, enter) <= kPivotEps)
        continue;
      const double ratio = std::max(t(i, cols), 0.0) / t(i, enter);
      if (ratio < best - 1e-14 ||
          (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
           basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(leave)])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0)
      break;
    pivot(leave, enter);
  }

  // Drive zero-level artificials out of the basis where a structural column
  // can replace them; rows that cannot be cleared are redundant.
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (basis[static_cast<size_t>(i)] < vars)
      continue;
    if (std::abs(t(i, cols)) > 1e-9)
      continue;
    Eigen::Index col = -1;
    double mag = 1e-9;
    for (Eigen::Index j = 0; j < vars; ++j) {
      if (std::abs(t(i, j)) > mag) {
        mag = std::abs(t(i, j));
        col = j;
      }
    }
    if (col >= 0)
      pivot(i, col);
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(vars);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index bv = basis[static_cast<size_t>(i)];
    if (bv < vars)
      y(bv) = std::max(t(i, cols), 0.0);
  }
  result.x = y + lower;
  result.iterations = it;
  result.objective = (a * result.x - b).lpNorm<1>();
  if (result.objective <= tol)
    result.verdict = Verdict::Feasible;
  else if (result.objective > 10.0 * tol)
    result.verdict = Verdict::Infeasible;
  else
    result.verdict = Verdict::Marginal;
  return result;
}

} // namespace cpinterp
