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

// Closed-form criteria for a single pair A -> B (family size one), stated on
// the eigenvalue vectors, together with the explicit transfer matrices that
// witness them.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "cpinterp/errors.hpp"
#include "cpinterp/feasibility.hpp"

namespace cpinterp {

// Eigenvalue vectors a (length n) and b (length m), stored sorted descending.
// The permutations back to the caller's order are kept so transfer matrices
// built on the sorted vectors can be reported in input order.
class SingleSpectrumPair {
public:
  SingleSpectrumPair(const Eigen::VectorXd &a, const Eigen::VectorXd &b)
      : a_order_(descending_order(a)), b_order_(descending_order(b)) {
    if (a.size() == 0 || b.size() == 0)
      throw InputError("spectra must be non-empty");
    if (!a.allFinite() || !b.allFinite())
      throw InputError("spectra must be finite");
    a_.resize(a.size());
    b_.resize(b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
      a_(i) = a(a_order_[static_cast<size_t>(i)]);
    for (Eigen::Index i = 0; i < b.size(); ++i)
      b_(i) = b(b_order_[static_cast<size_t>(i)]);
  }

  const Eigen::VectorXd &a() const { return a_; }
  const Eigen::VectorXd &b() const { return b_; }
  Eigen::Index n() const { return a_.size(); }
  Eigen::Index m() const { return b_.size(); }

  // 1e-9 * (1 + sum|a| + sum|b|)
  double default_tol() const {
    return 1e-9 * (1.0 + a_.cwiseAbs().sum() + b_.cwiseAbs().sum());
  }

  // Re-indexes a matrix built on the sorted vectors to the input order.
  Eigen::MatrixXd to_input_order(const Eigen::MatrixXd &sorted_d) const {
    Eigen::MatrixXd d(sorted_d.rows(), sorted_d.cols());
    for (Eigen::Index p = 0; p < d.rows(); ++p)
      for (Eigen::Index q = 0; q < d.cols(); ++q)
        d(a_order_[static_cast<size_t>(p)], b_order_[static_cast<size_t>(q)]) =
            sorted_d(p, q);
    return d;
  }

private:
  static std::vector<Eigen::Index> descending_order(const Eigen::VectorXd &v) {
    std::vector<Eigen::Index> idx(static_cast<size_t>(v.size()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return v(i) > v(j); });
    return idx;
  }

  std::vector<Eigen::Index> a_order_, b_order_;
  Eigen::VectorXd a_, b_;
};

// Scalars with gamma2 * min(a) <= b_j <= gamma1 * max(a) for every j.
struct GammaPair {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

// Existence of nonnegative gamma1, gamma2 bracketing b between scaled extreme
// eigenvalues of a. Feasible iff (max b <= 0 or max a > 0) and
// (min b >= 0 or min a < 0); the returned witnesses are the smallest such
// scalars.
inline std::optional<GammaPair> cp_single_feasible(const SingleSpectrumPair &p,
                                                   double tol = -1.0) {
  if (tol < 0.0)
    tol = p.default_tol();
  const double amax = p.a()(0), amin = p.a()(p.n() - 1);
  const double bmax = p.b()(0), bmin = p.b()(p.m() - 1);
  GammaPair g;
  if (bmax > tol) {
    if (amax <= 0.0)
      return std::nullopt;
    g.gamma1 = bmax / amax;
  }
  if (bmin < -tol) {
    if (amin >= 0.0)
      return std::nullopt;
    g.gamma2 = bmin / amin;
  }
  return g;
}

inline bool unital_single_feasible(const SingleSpectrumPair &p,
                                   double tol = -1.0) {
  if (tol < 0.0)
    tol = p.default_tol();
  const double amax = p.a()(0), amin = p.a()(p.n() - 1);
  return p.b()(0) <= amax + tol && p.b()(p.m() - 1) >= amin - tol;
}

// Equal traces and sum|a| >= sum|b|.
inline bool tp_single_feasible(const SingleSpectrumPair &p, double tol = -1.0) {
  if (tol < 0.0)
    tol = p.default_tol();
  const double trace_gap = std::abs(p.a().sum() - p.b().sum());
  return trace_gap <= tol && p.a().cwiseAbs().sum() >= p.b().cwiseAbs().sum() - tol;
}

// b is majorized by a: partial sums of sorted b never exceed those of a and
// the totals agree.
inline bool majorizes(const SingleSpectrumPair &p, double tol = -1.0) {
  if (p.n() != p.m())
    throw InputError("majorization needs equal-length vectors");
  if (tol < 0.0)
    tol = p.default_tol();
  double sa = 0.0, sb = 0.0;
  for (Eigen::Index i = 0; i < p.n(); ++i) {
    sa += p.a()(i);
    sb += p.b()(i);
    if (i + 1 < p.n() && sb > sa + tol)
      return false;
  }
  return std::abs(sa - sb) <= tol;
}

// First partial-sum index (1-based count) at which majorization fails, or 0.
inline Eigen::Index majorization_failure_index(const SingleSpectrumPair &p,
                                               double tol = -1.0) {
  if (tol < 0.0)
    tol = p.default_tol();
  double sa = 0.0, sb = 0.0;
  for (Eigen::Index i = 0; i + 1 < p.n(); ++i) {
    sa += p.a()(i);
    sb += p.b()(i);
    if (sb > sa + tol)
      return i + 1;
  }
  return 0;
}

// Transfer matrix supported on the rows of max(a) and min(a):
//   b_q = t_q gamma1 a_1 + (1 - t_q) gamma2 a_n,
//   t_q = (b_q - gamma2 a_n) / (gamma1 a_1 - gamma2 a_n).
// Returned in sorted order; column stochastic when gamma1 = gamma2 = 1.
inline TransferMatrix construct_D_unital(const SingleSpectrumPair &p,
                                         const GammaPair &g,
                                         double tol = -1.0) {
  if (tol < 0.0)
    tol = p.default_tol();
  if (g.gamma1 < 0.0 || g.gamma2 < 0.0)
    throw InputError("gamma witnesses must be nonnegative");
  const Eigen::Index n = p.n(), m = p.m();
  const double hi = g.gamma1 * p.a()(0);
  const double lo = g.gamma2 * p.a()(n - 1);
  for (Eigen::Index q = 0; q < m; ++q) {
    if (p.b()(q) > hi + tol || p.b()(q) < lo - tol)
      throw InputError("gamma witnesses do not bracket the target spectrum");
  }
  const bool unital = g.gamma1 == 1.0 && g.gamma2 == 1.0;
  TransferMatrix d{Eigen::MatrixXd::Zero(n, m),
                   unital ? StochasticClass::ColumnStochastic
                          : StochasticClass::Nonnegative};
  const double span = hi - lo;
  for (Eigen::Index q = 0; q < m; ++q) {
    double t = 1.0;
    if (std::abs(span) > 0.0)
      t = std::clamp((p.b()(q) - lo) / span, 0.0, 1.0);
    d.entries(0, q) += t * g.gamma1;
    d.entries(n - 1, q) += (1.0 - t) * g.gamma2;
  }
  return d;
}

// Row-stochastic transfer matrix in which every row for a_p >= 0 equals
//   (t_1, ..., t_s, 0, ..., 0) + u e_m,   t_q = b_q / a_+  (b_q >= 0),
// and every row for a_p < 0 equals
//   (0, ..., 0, t_{s+1}, ..., t_m) + v e_m, t_q = b_q / a_-  (b_q < 0),
// where a_+ (a_-) sums the positive (negative) entries of a and u, v absorb
// the leftover mass. Returned in sorted order.
inline TransferMatrix construct_D_tp(const SingleSpectrumPair &p,
                                     double tol = -1.0) {
  if (tol < 0.0)
    tol = p.default_tol();
  if (!tp_single_feasible(p, tol))
    throw InputError("trace-preserving criterion fails for this pair");
  const Eigen::Index n = p.n(), m = p.m();
  double a_pos = 0.0, a_neg = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    (p.a()(i) > 0.0 ? a_pos : a_neg) += p.a()(i);

  Eigen::RowVectorXd pos_row = Eigen::RowVectorXd::Zero(m);
  Eigen::RowVectorXd neg_row = Eigen::RowVectorXd::Zero(m);
  for (Eigen::Index q = 0; q < m; ++q) {
    const double bq = p.b()(q);
    if (bq >= 0.0) {
      if (a_pos > 0.0)
        pos_row(q) = bq / a_pos;
    } else if (a_neg < 0.0) {
      neg_row(q) = bq / a_neg;
    }
  }
  pos_row(m - 1) += std::max(0.0, 1.0 - pos_row.sum());
  neg_row(m - 1) += std::max(0.0, 1.0 - neg_row.sum());

  TransferMatrix d{Eigen::MatrixXd(n, m), StochasticClass::RowStochastic};
  for (Eigen::Index i = 0; i < n; ++i)
    d.entries.row(i) = p.a()(i) < 0.0 ? neg_row : pos_row;
  return d;
}

} // namespace cpinterp
