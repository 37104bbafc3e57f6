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

// Synthesis of explicit completely positive maps.
//
// Conventions. A KrausMap from M_n to M_m holds n x m operators F_j and acts as
//   Phi(X) = sum_j F_j^* X F_j.
// Diagonalizers follow the transfer-matrix setting: U^* A_i U = diag(a_i) and
// V B_i V^* = diag(b_i), i.e. U has the eigenvectors of the A-family as
// columns and V is the adjoint of the B-family's eigenvector matrix.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "cpinterp/analytic.hpp"
#include "cpinterp/errors.hpp"
#include "cpinterp/feasibility.hpp"
#include "cpinterp/linalg.hpp"
#include "cpinterp/matching.hpp"

namespace cpinterp {

//============================================================================
// Map types
//============================================================================

class KrausMap {
public:
  KrausMap() = default;

  KrausMap(Eigen::Index n, Eigen::Index m, std::vector<ComplexMatrix> ops)
      : n_(n), m_(m), ops_(std::move(ops)) {
    if (ops_.empty())
      throw InputError("a Kraus map needs at least one operator");
    for (const ComplexMatrix &f : ops_) {
      if (f.rows() != n_ || f.cols() != m_)
        throw InputError("Kraus operator has shape " + std::to_string(f.rows()) +
                         "x" + std::to_string(f.cols()) + ", expected " +
                         std::to_string(n_) + "x" + std::to_string(m_));
      if (!all_finite(f))
        throw InputError("Kraus operator has non-finite entries");
    }
  }

  explicit KrausMap(std::vector<ComplexMatrix> ops)
      : KrausMap(ops.empty() ? 0 : ops.front().rows(),
                 ops.empty() ? 0 : ops.front().cols(), std::move(ops)) {}

  static KrausMap identity(Eigen::Index n) {
    return KrausMap(n, n, {ComplexMatrix::Identity(n, n)});
  }

  // F_j = e_j e_j^t: keeps the diagonal, kills the rest.
  static KrausMap pinching(Eigen::Index n) {
    std::vector<ComplexMatrix> ops;
    for (Eigen::Index j = 0; j < n; ++j) {
      ComplexMatrix f = ComplexMatrix::Zero(n, n);
      f(j, j) = 1.0;
      ops.push_back(std::move(f));
    }
    return KrausMap(n, n, std::move(ops));
  }

  Eigen::Index input_dim() const { return n_; }
  Eigen::Index output_dim() const { return m_; }
  size_t size() const { return ops_.size(); }
  const std::vector<ComplexMatrix> &operators() const { return ops_; }

  // sum F_j^* F_j  (= Phi(I_n))
  ComplexMatrix unital_gram() const {
    ComplexMatrix s = ComplexMatrix::Zero(m_, m_);
    for (const ComplexMatrix &f : ops_)
      s += f.adjoint() * f;
    return s;
  }

  // sum F_j F_j^*  (= Phi^*(I_m))
  ComplexMatrix tp_gram() const {
    ComplexMatrix s = ComplexMatrix::Zero(n_, n_);
    for (const ComplexMatrix &f : ops_)
      s += f * f.adjoint();
    return s;
  }

private:
  Eigen::Index n_ = 0, m_ = 0;
  std::vector<ComplexMatrix> ops_;
};

// X -> sum_j t_j U_j^* X U_j with t_j > 0 summing to one.
struct MixedUnitaryMap {
  std::vector<double> weights;
  std::vector<ComplexMatrix> unitaries;

  Eigen::Index dim() const {
    return unitaries.empty() ? 0 : unitaries.front().rows();
  }

  void validate(double tol = 1e-10) const {
    if (weights.size() != unitaries.size() || weights.empty())
      throw InputError("mixed-unitary map needs matching non-empty weights "
                       "and unitaries");
    double total = 0.0;
    for (double t : weights) {
      if (!(t > 0.0))
        throw InputError("mixed-unitary weights must be positive");
      total += t;
    }
    if (std::abs(total - 1.0) > tol)
      throw InputError("mixed-unitary weights must sum to one");
    for (const ComplexMatrix &u : unitaries) {
      if (u.rows() != dim() || u.cols() != dim())
        throw InputError("mixed-unitary terms must share one square shape");
      if (!is_unitary(u, tol))
        throw InputError("mixed-unitary term is not unitary");
    }
  }

  // sqrt(t_j) U_j as Kraus operators.
  KrausMap to_kraus() const {
    std::vector<ComplexMatrix> ops;
    ops.reserve(unitaries.size());
    for (size_t j = 0; j < unitaries.size(); ++j)
      ops.push_back(std::sqrt(weights[j]) * unitaries[j]);
    return KrausMap(dim(), dim(), std::move(ops));
  }
};

struct BirkhoffDecomposition {
  std::vector<double> weights;
  // permutations[l][p] = column of the single 1 in row p of P_l
  std::vector<std::vector<Eigen::Index>> permutations;

  Eigen::Index dim() const {
    return permutations.empty()
               ? 0
               : static_cast<Eigen::Index>(permutations.front().size());
  }

  static Eigen::MatrixXd permutation_matrix(const std::vector<Eigen::Index> &perm) {
    const auto n = static_cast<Eigen::Index>(perm.size());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      p(r, perm[static_cast<size_t>(r)]) = 1.0;
    return p;
  }

  Eigen::MatrixXd reconstruct() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim(), dim());
    for (size_t l = 0; l < weights.size(); ++l)
      for (Eigen::Index r = 0; r < dim(); ++r)
        d(r, permutations[l][static_cast<size_t>(r)]) += weights[l];
    return d;
  }
};

//============================================================================
// Kraus operators from a transfer matrix
//============================================================================

// Column form: F_j is n x m with column j equal to (sqrt d_1j, ..., sqrt d_nj)^t,
// giving m operators with sum F_j^* F_j = diag(column sums of D).
// Entry form, used when the class constrains row sums: F_pq = sqrt d_pq E_pq,
// giving n*m operators whose Gram sums are the diagonal row and column sums;
// the column form cannot be trace preserving because sum F_j F_j^* couples
// rows. Either way sum F^* diag(x) F = diag(x D) and the result is {U F V}.
// Vanishing entries still produce (zero) operators so the count is fixed.
inline KrausMap kraus_from_transfer(const TransferMatrix &d,
                                    const ComplexMatrix &u,
                                    const ComplexMatrix &v,
                                    double unitary_tol = 1e-10) {
  const Eigen::Index n = d.rows(), m = d.cols();
  if (n == 0 || m == 0)
    throw InputError("transfer matrix must be non-empty");
  if (u.rows() != n || u.cols() != n || v.rows() != m || v.cols() != m)
    throw InputError("diagonalizer shapes do not match the transfer matrix");
  if (!is_unitary(u, unitary_tol) || !is_unitary(v, unitary_tol))
    throw InputError("diagonalizers must be unitary");
  if (d.entries.minCoeff() < -1e-12)
    throw InputError("transfer matrix has negative entries");

  std::vector<ComplexMatrix> ops;
  if (needs_row_sums(d.cls)) {
    ops.reserve(static_cast<size_t>(n * m));
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = 0; q < m; ++q) {
        // U (sqrt d E_pq) V = sqrt d * (column p of U)(row q of V)
        const double s = std::sqrt(std::max(d.entries(p, q), 0.0));
        ops.push_back(s * u.col(p) * v.row(q));
      }
    }
    return KrausMap(n, m, std::move(ops));
  }
  ops.reserve(static_cast<size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) {
    ComplexMatrix f = ComplexMatrix::Zero(n, m);
    for (Eigen::Index p = 0; p < n; ++p)
      f(p, j) = std::sqrt(std::max(d.entries(p, j), 0.0));
    ops.push_back(u * f * v);
  }
  return KrausMap(n, m, std::move(ops));
}

//============================================================================
// Birkhoff decomposition
//============================================================================

// Greedy peeling: repeatedly find a permutation supported on the positive
// entries (perfect matching), subtract it with weight equal to the smallest
// matched entry and zero what falls below `peel_tol`. Each step moves to a
// lower-dimensional face of the Birkhoff polytope, so at most (n-1)^2 + 1
// terms are produced.
inline BirkhoffDecomposition birkhoff_decompose(const TransferMatrix &d,
                                                double ds_tol = 1e-9,
                                                double peel_tol = 1e-12) {
  const Eigen::Index n = d.rows();
  if (d.cols() != n || n == 0)
    throw InputError("Birkhoff decomposition needs a square matrix");
  if (!satisfies_class(d.entries, StochasticClass::DoublyStochastic, ds_tol))
    throw InputError("matrix is not doubly stochastic within tolerance");

  Eigen::MatrixXd rest = d.entries.cwiseMax(0.0);
  rest = (rest.array() > peel_tol).select(rest, 0.0);
  BirkhoffDecomposition out;
  const size_t max_terms = static_cast<size_t>(n * n);
  while (rest.maxCoeff() > peel_tol) {
    auto match = perfect_matching(rest, peel_tol);
    if (!match) {
      // Leftover roundoff mass may no longer carry a matching.
      if (rest.rowwise().sum().maxCoeff() <= ds_tol)
        break;
      throw NumericalError("no perfect matching on the positive support; "
                           "input is not doubly stochastic at this tolerance",
                           rest.rowwise().sum().maxCoeff());
    }
    double weight = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < n; ++r)
      weight = std::min(weight, rest(r, (*match)[static_cast<size_t>(r)]));
    for (Eigen::Index r = 0; r < n; ++r) {
      double &e = rest(r, (*match)[static_cast<size_t>(r)]);
      e -= weight;
      if (e <= peel_tol)
        e = 0.0;
    }
    out.weights.push_back(weight);
    out.permutations.push_back(std::move(*match));
    if (out.weights.size() > max_terms)
      throw NumericalError("Birkhoff peeling did not terminate",
                           rest.maxCoeff());
  }
  if (out.weights.empty())
    throw NumericalError("Birkhoff peeling produced no terms", 0.0);
  const double total =
      std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
  for (double &t : out.weights)
    t /= total;
  return out;
}

// Psi(X) = sum_l t_l (U P_l V)^* X (U P_l V).
inline MixedUnitaryMap
mixed_unitary_from_decomposition(const BirkhoffDecomposition &dec,
                                 const ComplexMatrix &u, const ComplexMatrix &v) {
  const Eigen::Index n = dec.dim();
  if (u.rows() != n || u.cols() != n || v.rows() != n || v.cols() != n)
    throw InputError("diagonalizers must match the decomposition dimension");
  MixedUnitaryMap out;
  out.weights = dec.weights;
  for (const auto &perm : dec.permutations) {
    const ComplexMatrix p =
        BirkhoffDecomposition::permutation_matrix(perm).cast<Complex>();
    out.unitaries.push_back(u * p * v);
  }
  return out;
}

//============================================================================
// Schur-Horn
//============================================================================

// Real orthogonal W with diag(W diag(a) W^*) = b (both in input order),
// assembled from n - 1 plane rotations. Each rotation is a T-transform that
// pins the largest unassigned target b_k onto a coordinate whose current
// diagonal value is just above it, against the neighbouring coordinate just
// below it; the untouched coordinates stay diagonal, which is what lets the
// procedure recurse.
inline ComplexMatrix schur_horn_unitary(const Eigen::VectorXd &a,
                                        const Eigen::VectorXd &b,
                                        double tol = -1.0) {
  const Eigen::Index n = a.size();
  if (b.size() != n || n == 0)
    throw InputError("Schur-Horn needs equal-length non-empty vectors");
  const SingleSpectrumPair pair(a, b);
  if (!majorizes(pair, tol))
    throw InputError("target diagonal is not majorized by the spectrum");

  std::vector<Eigen::Index> targets(static_cast<size_t>(n));
  std::iota(targets.begin(), targets.end(), Eigen::Index{0});
  std::stable_sort(targets.begin(), targets.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return b(x) > b(y); });

  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd diag = a;
  std::vector<Eigen::Index> active(static_cast<size_t>(n));
  std::iota(active.begin(), active.end(), Eigen::Index{0});
  std::vector<Eigen::Index> assigned(static_cast<size_t>(n), -1); // coord -> target

  for (size_t step = 0; step + 1 < static_cast<size_t>(n); ++step) {
    const Eigen::Index target = targets[step];
    const double goal = b(target);
    std::stable_sort(active.begin(), active.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return diag(x) > diag(y); });
    size_t below = active.size() - 1;
    for (size_t s = 0; s < active.size(); ++s) {
      if (diag(active[s]) <= goal) {
        below = s;
        break;
      }
    }
    Eigen::Index pinned;
    if (below == 0) {
      pinned = active[0];
    } else {
      const Eigen::Index hi = active[below - 1], lo = active[below];
      const double gap = diag(hi) - diag(lo);
      const double c2 =
          gap > 0.0 ? std::clamp((goal - diag(lo)) / gap, 0.0, 1.0) : 1.0;
      const double c = std::sqrt(c2), s = std::sqrt(1.0 - c2);
      // Rows hi/lo of W mix as G = [[c, s], [-s, c]].
      const Eigen::RowVectorXd rhi = w.row(hi), rlo = w.row(lo);
      w.row(hi) = c * rhi + s * rlo;
      w.row(lo) = -s * rhi + c * rlo;
      diag(lo) = diag(hi) + diag(lo) - goal;
      diag(hi) = goal;
      pinned = hi;
    }
    assigned[static_cast<size_t>(pinned)] = target;
    active.erase(std::find(active.begin(), active.end(), pinned));
  }
  assigned[static_cast<size_t>(active.front())] = targets.back();

  // Move coordinate c to position assigned[c].
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    out.row(assigned[static_cast<size_t>(c)]) = w.row(c);
  return out.cast<Complex>();
}

// n equal-weight unitary conjugations with (1/n) sum U_j^* A U_j = B, built as
// U_j = U W^* P^j V^* where A = U diag(a) U^*, B = V diag(b) V^*, W solves the
// Schur-Horn problem for (a, b) and P = diag(1, w, ..., w^{n-1}).
inline MixedUnitaryMap equal_weight_unitaries(const HermitianMatrix &a_mat,
                                              const HermitianMatrix &b_mat,
                                              double tol = -1.0) {
  const Eigen::Index n = a_mat.dim();
  if (b_mat.dim() != n)
    throw InputError("equal-weight construction needs equal dimensions");
  const EigenDecomposition ea = eig_hermitian(a_mat);
  const EigenDecomposition eb = eig_hermitian(b_mat);
  const ComplexMatrix w = schur_horn_unitary(ea.values, eb.values, tol);

  MixedUnitaryMap out;
  const ComplexMatrix left = ea.basis * w.adjoint();
  for (Eigen::Index j = 1; j <= n; ++j) {
    out.unitaries.push_back(left * root_of_unity_power(n, j) *
                            eb.basis.adjoint());
    out.weights.push_back(1.0 / static_cast<double>(n));
  }
  return out;
}

//============================================================================
// Dual map and unital extension
//============================================================================

// Phi^*(B) = sum_j F_j B F_j^*; operators are the adjoints (m x n).
inline KrausMap dual_map(const KrausMap &k) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(k.size());
  for (const ComplexMatrix &f : k.operators())
    ops.push_back(f.adjoint());
  return KrausMap(k.output_dim(), k.input_dim(), std::move(ops));
}

// Unital map Psi: M_{n+1} -> M_m with Psi(X (+) [0]) = Phi(X) / gamma.
// gamma I_m - Phi(I_n) = sum_j g_j^* g_j with g_j = sqrt(lambda_j) v_j^* from
// its eigenpairs (lambda_j > 1e-12); operators are [F_j; g_j] / sqrt(gamma),
// padding with zero blocks when the two lists differ in length.
inline KrausMap unital_extension(const KrausMap &k, double gamma,
                                 double psd_tol = 1e-9) {
  if (!(gamma > 0.0))
    throw InputError("gamma must be positive");
  const Eigen::Index n = k.input_dim(), m = k.output_dim();
  const ComplexMatrix p = k.unital_gram();
  const ComplexMatrix gap =
      gamma * ComplexMatrix::Identity(m, m) - p;
  const EigenDecomposition e = detail::eig_sorted((gap + gap.adjoint()) * 0.5);
  if (m > 0 && e.values(m - 1) < -psd_tol * (1.0 + gamma))
    throw InputError("gamma is below lambda_max(Phi(I)) = " +
                     std::to_string(lambda_max(p)));

  std::vector<Eigen::RowVectorXcd> g;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (e.values(j) > 1e-12)
      g.push_back(std::sqrt(e.values(j)) * e.basis.col(j).adjoint());
  }
  const size_t count = std::max(k.size(), g.size());
  const double scale = 1.0 / std::sqrt(gamma);
  std::vector<ComplexMatrix> ops;
  ops.reserve(count);
  for (size_t j = 0; j < count; ++j) {
    ComplexMatrix f = ComplexMatrix::Zero(n + 1, m);
    if (j < k.size())
      f.topRows(n) = k.operators()[j];
    if (j < g.size())
      f.row(n) = g[j];
    ops.push_back(scale * f);
  }
  return KrausMap(n + 1, m, std::move(ops));
}

} // namespace cpinterp
