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

// Independent checks on synthesized maps. Nothing here trusts how a map was
// built: properties are measured by direct evaluation.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "cpinterp/construct.hpp"
#include "cpinterp/errors.hpp"
#include "cpinterp/linalg.hpp"

namespace cpinterp {

//============================================================================
// Application
//============================================================================

// sum_j F_j^* X F_j
inline ComplexMatrix apply_map(const KrausMap &k, const ComplexMatrix &x) {
  if (x.rows() != k.input_dim() || x.cols() != k.input_dim())
    throw InputError("input matrix does not match the map's input dimension");
  ComplexMatrix y = ComplexMatrix::Zero(k.output_dim(), k.output_dim());
  for (const ComplexMatrix &f : k.operators())
    y.noalias() += f.adjoint() * x * f;
  return y;
}

inline ComplexMatrix apply_map(const MixedUnitaryMap &mu, const ComplexMatrix &x) {
  if (x.rows() != mu.dim() || x.cols() != mu.dim())
    throw InputError("input matrix does not match the map's dimension");
  ComplexMatrix y = ComplexMatrix::Zero(mu.dim(), mu.dim());
  for (size_t j = 0; j < mu.unitaries.size(); ++j)
    y.noalias() += mu.weights[j] * (mu.unitaries[j].adjoint() * x * mu.unitaries[j]);
  return y;
}

// F^* (I_r (x) X) F with F the vertical stack of the operators.
inline ComplexMatrix apply_stacked(const KrausMap &k, const ComplexMatrix &x) {
  const Eigen::Index n = k.input_dim(), m = k.output_dim();
  const auto r = static_cast<Eigen::Index>(k.size());
  ComplexMatrix f(r * n, m);
  for (Eigen::Index j = 0; j < r; ++j)
    f.middleRows(j * n, n) = k.operators()[static_cast<size_t>(j)];
  ComplexMatrix block = ComplexMatrix::Zero(r * n, r * n);
  for (Eigen::Index j = 0; j < r; ++j)
    block.block(j * n, j * n, n, n) = x;
  return f.adjoint() * block * f;
}

// Sum of the diagonal m x m blocks of G^* X G, G = [F_1 ... F_r].
inline ComplexMatrix apply_block_trace(const KrausMap &k, const ComplexMatrix &x) {
  const Eigen::Index n = k.input_dim(), m = k.output_dim();
  const auto r = static_cast<Eigen::Index>(k.size());
  ComplexMatrix g(n, r * m);
  for (Eigen::Index j = 0; j < r; ++j)
    g.middleCols(j * m, m) = k.operators()[static_cast<size_t>(j)];
  const ComplexMatrix big = g.adjoint() * x * g;
  ComplexMatrix y = ComplexMatrix::Zero(m, m);
  for (Eigen::Index j = 0; j < r; ++j)
    y += big.block(j * m, j * m, m, m);
  return y;
}

//============================================================================
// Choi matrix
//============================================================================

// sum_{p,q} E_pq (x) Phi(E_pq), system index first: entry
// (p*m + r, q*m + s) = Phi(E_pq)_{rs} = sum_j conj(F_j[p,r]) F_j[q,s].
struct ChoiMatrix {
  Eigen::Index n = 0, m = 0;
  ComplexMatrix matrix;
};

inline ChoiMatrix choi_matrix(const KrausMap &k) {
  const Eigen::Index n = k.input_dim(), m = k.output_dim();
  ChoiMatrix c{n, m, ComplexMatrix::Zero(n * m, n * m)};
  for (const ComplexMatrix &f : k.operators()) {
    // vec[(p, r)] = conj(F[p, r]) in row-major order
    ComplexVector v(n * m);
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index r = 0; r < m; ++r)
        v(p * m + r) = std::conj(f(p, r));
    c.matrix.noalias() += v * v.adjoint();
  }
  return c;
}

// Same layout, assembled by applying the map to each matrix unit. Used as an
// independent route in tests.
inline ChoiMatrix choi_matrix_by_units(const KrausMap &k) {
  const Eigen::Index n = k.input_dim(), m = k.output_dim();
  ChoiMatrix c{n, m, ComplexMatrix::Zero(n * m, n * m)};
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = 0; q < n; ++q) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(p, q) = 1.0;
      c.matrix.block(p * m, q * m, m, m) = apply_map(k, e);
    }
  }
  return c;
}

inline Eigen::Index numerical_rank(const RealVector &eigenvalues,
                                   double rel = 1e-10) {
  if (eigenvalues.size() == 0)
    return 0;
  const double cut = rel * std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
  return (eigenvalues.array() > cut).count();
}

// Kraus operators from the eigendecomposition of a PSD Choi matrix; one
// operator per eigenvalue above the numerical-rank cutoff.
inline KrausMap kraus_from_choi(const ChoiMatrix &c) {
  const Eigen::Index n = c.n, m = c.m;
  if (c.matrix.rows() != n * m || c.matrix.cols() != n * m)
    throw InputError("Choi matrix shape does not match its dimensions");
  const ComplexMatrix h = (c.matrix + c.matrix.adjoint()) * 0.5;
  const EigenDecomposition e = detail::eig_sorted(h);
  const double norm = e.values.size() ? e.values.cwiseAbs().maxCoeff() : 0.0;
  if (e.values.size() && e.values.minCoeff() < -1e-6 * norm)
    throw InputError("Choi matrix has a significantly negative eigenvalue; "
                     "the map is not completely positive");
  const Eigen::Index rank = numerical_rank(e.values);
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index j = 0; j < std::max<Eigen::Index>(rank, 1); ++j) {
    const double lam = std::max(e.values(j), 0.0);
    ComplexMatrix f(n, m);
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index r = 0; r < m; ++r)
        f(p, r) = std::conj(std::sqrt(lam) * e.basis(p * m + r, j));
    ops.push_back(std::move(f));
  }
  return KrausMap(n, m, std::move(ops));
}

//============================================================================
// Property report
//============================================================================

struct VerificationReport {
  bool is_cp = false;
  double min_choi_eigenvalue = 0.0;
  bool is_unital = false;
  double unital_residual = 0.0; // ||sum F^*F - I_m||_max
  bool is_tp = false;
  double tp_residual = 0.0;     // ||sum F F^* - I_n||_max
  std::vector<double> interpolation_residuals; // ||Phi(A_i) - B_i||_max
  Eigen::Index kraus_rank = 0;  // numerical rank of the Choi matrix
  size_t operator_count = 0;

  double max_interpolation_residual() const {
    double worst = 0.0;
    for (double r : interpolation_residuals)
      worst = std::max(worst, r);
    return worst;
  }
};

using MatrixPair = std::pair<ComplexMatrix, ComplexMatrix>;

// Measures CP-ness (Choi spectrum), unitality, trace preservation and the
// interpolation residual on every pair. Never throws on a failed property.
inline VerificationReport check_properties(const KrausMap &k,
                                           const std::vector<MatrixPair> &pairs,
                                           double tol = 1e-8) {
  VerificationReport rep;
  const Eigen::Index n = k.input_dim(), m = k.output_dim();
  for (const auto &[a, b] : pairs) {
    if (a.rows() != n || a.cols() != n || b.rows() != m || b.cols() != m)
      throw InputError("pair shapes do not match the map");
  }
  const ChoiMatrix c = choi_matrix(k);
  const EigenDecomposition e =
      detail::eig_sorted((c.matrix + c.matrix.adjoint()) * 0.5);
  rep.min_choi_eigenvalue = e.values.size() ? e.values.minCoeff() : 0.0;
  const double choi_scale = e.values.size() ? e.values.cwiseAbs().maxCoeff() : 0.0;
  rep.is_cp = rep.min_choi_eigenvalue >= -1e-9 * (1.0 + choi_scale);
  rep.kraus_rank = numerical_rank(e.values);
  rep.operator_count = k.size();

  rep.unital_residual =
      max_abs(k.unital_gram() - ComplexMatrix::Identity(m, m));
  rep.tp_residual = max_abs(k.tp_gram() - ComplexMatrix::Identity(n, n));
  rep.is_unital = rep.unital_residual <= tol;
  rep.is_tp = rep.tp_residual <= tol;
  for (const auto &[a, b] : pairs)
    rep.interpolation_residuals.push_back(max_abs(apply_map(k, a) - b));
  return rep;
}

inline VerificationReport check_properties(const MixedUnitaryMap &mu,
                                           const std::vector<MatrixPair> &pairs,
                                           double tol = 1e-8) {
  VerificationReport rep = check_properties(mu.to_kraus(), pairs, tol);
  // Residuals via the weighted-unitary form itself.
  rep.interpolation_residuals.clear();
  for (const auto &[a, b] : pairs)
    rep.interpolation_residuals.push_back(max_abs(apply_map(mu, a) - b));
  return rep;
}

//============================================================================
// Numerical range
//============================================================================

// h(theta) = lambda_max of the Hermitian part of e^{-i theta} T, the support
// function of W(T) in direction theta.
inline std::vector<double> numrange_support(const ComplexMatrix &t,
                                            const std::vector<double> &angles) {
  if (t.rows() != t.cols())
    throw InputError("numerical range needs a square matrix");
  std::vector<double> out;
  out.reserve(angles.size());
  for (double theta : angles) {
    const ComplexMatrix rot = std::polar(1.0, -theta) * t;
    out.push_back(lambda_max((rot + rot.adjoint()) * 0.5));
  }
  return out;
}

inline std::vector<double> uniform_angles(int grid) {
  std::vector<double> angles;
  angles.reserve(static_cast<size_t>(std::max(grid, 0)));
  for (int i = 0; i < grid; ++i)
    angles.push_back(2.0 * M_PI * i / grid);
  return angles;
}

inline double operator_norm(const ComplexMatrix &t) {
  if (t.size() == 0)
    return 0.0;
  return Eigen::JacobiSVD<ComplexMatrix>(t).singularValues()(0);
}

inline double default_numrange_tol(const ComplexMatrix &a,
                                   const ComplexMatrix &b) {
  return 1e-7 * (1.0 + operator_norm(a) + operator_norm(b));
}

struct NumrangeReport {
  bool contained = false;
  std::vector<double> angles;
  std::vector<double> margins; // support(A) - support(B); >= -tol when contained
  double worst_margin = 0.0;
  double tol = 0.0;
};

inline NumrangeReport numrange_compare(const ComplexMatrix &b,
                                       const ComplexMatrix &a, int grid = 720,
                                       double tol = -1.0) {
  if (grid <= 0)
    throw InputError("angle grid must be positive");
  NumrangeReport rep;
  rep.tol = tol < 0.0 ? default_numrange_tol(a, b) : tol;
  rep.angles = uniform_angles(grid);
  const std::vector<double> sa = numrange_support(a, rep.angles);
  const std::vector<double> sb = numrange_support(b, rep.angles);
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < rep.angles.size(); ++i) {
    rep.margins.push_back(sa[i] - sb[i]);
    rep.worst_margin = std::min(rep.worst_margin, sa[i] - sb[i]);
  }
  rep.contained = rep.worst_margin >= -rep.tol;
  return rep;
}

// W(B) inside W(A) up to the angle grid: support(B) <= support(A) + tol.
inline bool numrange_contained(const ComplexMatrix &b, const ComplexMatrix &a,
                               int grid = 720, double tol = -1.0) {
  return numrange_compare(b, a, grid, tol).contained;
}

// Heuristic for "A is unitarily similar to A1 (+) [alpha]": the smallest
// ||A^* x - conj(lambda) x|| over unit eigenvectors x of A. Zero exactly when
// some eigenvector spans a reducing subspace. Ill-conditioned; report only.
inline double reducibility_residual(const ComplexMatrix &a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw InputError("reducibility check needs a non-empty square matrix");
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a);
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    const ComplexVector x = solver.eigenvectors().col(j).normalized();
    const Complex lam = solver.eigenvalues()(j);
    best = std::min(best, (a.adjoint() * x - std::conj(lam) * x).norm());
  }
  return best;
}

} // namespace cpinterp
