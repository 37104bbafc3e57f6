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

#include <array>
#include <optional>
#include <string>

#include "cpinterp/analytic.hpp"
#include "cpinterp/errors.hpp"
#include "cpinterp/feasibility.hpp"
#include "cpinterp/linalg.hpp"

namespace cpinterp {

struct ClassVerdict {
  StochasticClass cls = StochasticClass::Nonnegative;
  Verdict verdict = Verdict::Infeasible;
  std::optional<TransferMatrix> witness; // in spectrum-table column order
  double witness_residual = 0.0;         // ||b - a D||_max on the cleaned tables
  std::string criterion;
  std::optional<bool> analytic;          // closed-form verdict when k == 1
  FeasibilityResult lp;
};

struct FeasibilityReport {
  std::array<ClassVerdict, 4> classes;

  const ClassVerdict &operator[](StochasticClass c) const {
    return classes[static_cast<size_t>(c)];
  }
  ClassVerdict &operator[](StochasticClass c) {
    return classes[static_cast<size_t>(c)];
  }
};

namespace detail {

// Eigenvalues that are zero up to roundoff are set to exactly zero so the
// sign-sensitive closed forms and the LP see the same numbers.
inline Eigen::MatrixXd clean_table(const Eigen::MatrixXd &t, double scale) {
  const double cut = 1e-12 * std::max(1.0, scale);
  return (t.array().abs() <= cut).select(0.0, t);
}

inline bool analytic_verdict(StochasticClass c, const SingleSpectrumPair &p,
                             double tol) {
  switch (c) {
  case StochasticClass::Nonnegative:
    return cp_single_feasible(p, tol).has_value();
  case StochasticClass::ColumnStochastic:
    return unital_single_feasible(p, tol);
  case StochasticClass::RowStochastic:
    return tp_single_feasible(p, tol);
  case StochasticClass::DoublyStochastic:
    return p.n() == p.m() && majorizes(p, tol);
  }
  return false;
}

inline const char *analytic_criterion(StochasticClass c) {
  switch (c) {
  case StochasticClass::Nonnegative:
    return "analytic:gamma-bracket";
  case StochasticClass::ColumnStochastic:
    return "analytic:spectral-bracket";
  case StochasticClass::RowStochastic:
    return "analytic:trace-and-absolute-sum";
  case StochasticClass::DoublyStochastic:
    return "analytic:majorization";
  }
  return "";
}

// Explicit transfer matrix from the closed-form construction, in table order.
inline std::optional<TransferMatrix>
analytic_witness(StochasticClass c, const SingleSpectrumPair &p, double tol) {
  switch (c) {
  case StochasticClass::Nonnegative: {
    const auto g = cp_single_feasible(p, tol);
    if (!g)
      return std::nullopt;
    TransferMatrix d = construct_D_unital(p, *g, tol);
    return TransferMatrix{p.to_input_order(d.entries), c};
  }
  case StochasticClass::ColumnStochastic: {
    TransferMatrix d = construct_D_unital(p, GammaPair{1.0, 1.0}, tol);
    return TransferMatrix{p.to_input_order(d.entries), c};
  }
  case StochasticClass::RowStochastic: {
    TransferMatrix d = construct_D_tp(p, tol);
    return TransferMatrix{p.to_input_order(d.entries), c};
  }
  case StochasticClass::DoublyStochastic:
    return std::nullopt;
  }
  return std::nullopt;
}

} // namespace detail

// Per-class feasibility of (b_ij) = (a_ij) D. For single-matrix families the
// closed-form criteria are evaluated alongside the LP; a disagreement that
// survives loosening and tightening the closed-form tolerance by 100x while
// the LP is outside its marginal band raises ConsistencyError.
inline FeasibilityReport classify(const SpectrumTable &a_tab,
                                  const SpectrumTable &b_tab,
                                  double feas_tol = 1e-8) {
  if (a_tab.k != b_tab.k || a_tab.table.rows() != b_tab.table.rows())
    throw InputError("families have different sizes");
  double scale = 0.0;
  if (a_tab.table.size())
    scale = std::max(scale, a_tab.table.cwiseAbs().maxCoeff());
  if (b_tab.table.size())
    scale = std::max(scale, b_tab.table.cwiseAbs().maxCoeff());
  const Eigen::MatrixXd at = detail::clean_table(a_tab.table, scale);
  const Eigen::MatrixXd bt = detail::clean_table(b_tab.table, scale);

  FeasibilityReport report;
  for (StochasticClass c : kAllClasses) {
    ClassVerdict &cv = report[c];
    cv.cls = c;
    cv.lp = find_transfer_matrix(FeasibilitySystem{at, bt, c}, feas_tol);
    cv.verdict = cv.lp.verdict;
    cv.witness = cv.lp.witness;
    cv.witness_residual = cv.lp.residual;
    cv.criterion = cv.lp.method;
    if (at.rows() != 1)
      continue;

    const SingleSpectrumPair pair(at.row(0).transpose(), bt.row(0).transpose());
    const double tol = pair.default_tol();
    const bool closed = detail::analytic_verdict(c, pair, tol);
    cv.analytic = closed;
    if (cv.lp.verdict == Verdict::Marginal)
      continue;
    const bool lp_yes = cv.lp.verdict == Verdict::Feasible;
    if (closed != lp_yes) {
      const bool loose = detail::analytic_verdict(c, pair, 100.0 * tol);
      const bool tight = detail::analytic_verdict(c, pair, 0.01 * tol);
      if (loose != tight) {
        cv.verdict = Verdict::Marginal;
        cv.criterion = std::string(detail::analytic_criterion(c)) + "+lp";
        continue;
      }
      throw ConsistencyError(std::string("closed-form and LP verdicts disagree "
                                         "for class ") +
                             class_name(c));
    }
    cv.criterion = std::string(detail::analytic_criterion(c)) + "+" + cv.lp.method;
    if (closed) {
      // Prefer the explicit construction when it reproduces b within tolerance.
      if (auto d = detail::analytic_witness(c, pair, tol)) {
        const double res = (bt - at * d->entries).cwiseAbs().maxCoeff();
        if (res <= cv.lp.tolerance && satisfies_class(d->entries, c)) {
          cv.witness = std::move(d);
          cv.witness_residual = res;
          cv.criterion = detail::analytic_criterion(c);
        }
      }
    }
  }
  return report;
}

} // namespace cpinterp
