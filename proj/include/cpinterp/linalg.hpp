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
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cpinterp/errors.hpp"

namespace cpinterp {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived> &m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const ComplexMatrix &m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      return false;
  }
  return true;
}

//============================================================================
// HermitianMatrix
//============================================================================

// A square complex matrix checked to be self-adjoint. The stored matrix is the
// symmetrized (H + H^*)/2 so downstream code may rely on exact Hermiticity.
class HermitianMatrix {
public:
  HermitianMatrix() = default;

  // Throws InputError when ||H - H^*||_max > rel_tol * (1 + ||H||_max).
  explicit HermitianMatrix(const ComplexMatrix &h, double rel_tol = 1e-10) {
    const double asym = asymmetry(h);
    if (asym > rel_tol * (1.0 + max_abs(h)))
      throw InputError("matrix is not Hermitian: ||H - H^*||_max = " +
                       std::to_string(asym));
    assign(h);
  }

  // Symmetrizes without rejecting; reports the raw asymmetry.
  static HermitianMatrix symmetrized(const ComplexMatrix &h,
                                     double *asym_out = nullptr) {
    if (asym_out)
      *asym_out = asymmetry(h);
    HermitianMatrix out;
    out.assign(h);
    return out;
  }

  static HermitianMatrix diagonal(const RealVector &d) {
    return HermitianMatrix(ComplexMatrix(d.cast<Complex>().asDiagonal()));
  }

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix &matrix() const { return m_; }
  operator const ComplexMatrix &() const { return m_; }

  static double asymmetry(const ComplexMatrix &h) {
    if (h.rows() != h.cols())
      throw InputError("Hermitian matrix must be square");
    return max_abs(h - h.adjoint());
  }

private:
  void assign(const ComplexMatrix &h) {
    if (h.rows() != h.cols())
      throw InputError("Hermitian matrix must be square");
    if (!all_finite(h))
      throw InputError("matrix has non-finite entries");
    m_ = (h + h.adjoint()) * 0.5;
  }

  ComplexMatrix m_;
};

//============================================================================
// Eigendecomposition
//============================================================================

struct EigenDecomposition {
  RealVector values;     // descending
  ComplexMatrix basis;   // columns are eigenvectors
};

namespace detail {

// Rotates v so its first non-negligible component is real and positive.
inline ComplexVector phase_normalized(const ComplexVector &v) {
  const double floor = 1e-8 * std::max(v.norm(), 1e-300);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > floor)
      return v * (std::conj(v(i)) / std::abs(v(i)));
  }
  return v;
}

inline bool lexicographic_less(const ComplexVector &x, const ComplexVector &y) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i).real() - y(i).real()) > 1e-12)
      return x(i).real() < y(i).real();
    if (std::abs(x(i).imag() - y(i).imag()) > 1e-12)
      return x(i).imag() < y(i).imag();
  }
  return false;
}

// Eigendecomposition of an (assumed exactly) Hermitian matrix with the
// descending / lexicographic ordering and phase convention applied.
inline EigenDecomposition eig_sorted(const ComplexMatrix &h) {
  const Eigen::Index n = h.rows();
  EigenDecomposition out;
  if (n == 0) {
    out.values.resize(0);
    out.basis.resize(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver did not converge",
                         std::numeric_limits<double>::infinity());
  }
  const RealVector &vals = solver.eigenvalues();
  const ComplexMatrix &vecs = solver.eigenvectors();

  std::vector<ComplexVector> cols(static_cast<size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j)
    cols[static_cast<size_t>(j)] = phase_normalized(vecs.col(j));

  const double tie = 1e-12 * std::max(1.0, vals.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i,
                                                   Eigen::Index j) {
    if (std::abs(vals(i) - vals(j)) > tie)
      return vals(i) > vals(j);
    return lexicographic_less(cols[static_cast<size_t>(i)],
                              cols[static_cast<size_t>(j)]);
  });

  out.values.resize(n);
  out.basis.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values(j) = vals(order[static_cast<size_t>(j)]);
    out.basis.col(j) = cols[static_cast<size_t>(order[static_cast<size_t>(j)])];
  }
  return out;
}

} // namespace detail

// Descending eigenvalues and a unitary eigenbasis; ties are ordered by the
// phase-normalized eigenvector so repeated runs agree.
inline EigenDecomposition eig_hermitian(const HermitianMatrix &h,
                                        double rel_tol = 1e-8) {
  EigenDecomposition out = detail::eig_sorted(h.matrix());
  if (h.dim() == 0)
    return out;
  const double scale = 1.0 + max_abs(h.matrix());
  const double residual = max_abs(
      h.matrix() -
      out.basis * out.values.cast<Complex>().asDiagonal() * out.basis.adjoint());
  if (residual > rel_tol * scale)
    throw NumericalError("eigendecomposition residual above tolerance",
                         residual);
  return out;
}

inline double spectral_radius(const HermitianMatrix &h) {
  if (h.dim() == 0)
    return 0.0;
  return detail::eig_sorted(h.matrix()).values.cwiseAbs().maxCoeff();
}

inline double lambda_max(const ComplexMatrix &hermitian) {
  if (hermitian.rows() == 0)
    return -std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      (hermitian + hermitian.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

inline double lambda_min(const ComplexMatrix &hermitian) {
  if (hermitian.rows() == 0)
    return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      (hermitian + hermitian.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

//============================================================================
// Predicates
//============================================================================

inline double unitarity_residual(const ComplexMatrix &u) {
  if (u.rows() != u.cols())
    return std::numeric_limits<double>::infinity();
  return max_abs(u.adjoint() * u -
                 ComplexMatrix::Identity(u.rows(), u.cols()));
}

inline bool is_unitary(const ComplexMatrix &u, double tol = 1e-10) {
  return unitarity_residual(u) <= tol;
}

inline bool is_psd(const ComplexMatrix &h, double tol = 1e-9) {
  return lambda_min(h) >= -tol * (1.0 + max_abs(h));
}

struct CommutatorReport {
  bool commuting = true;
  size_t first = 0, second = 0;  // worst pair
  double norm = 0.0;             // ||A_i A_j - A_j A_i||_max for that pair
  double ratio = 0.0;            // norm / (1 + ||A_i|| ||A_j||)
};

// Worst commutator over all pairs, normalized as in is_commuting_family.
inline CommutatorReport commutator_report(std::span<const HermitianMatrix> family,
                                          double tol = 1e-8) {
  CommutatorReport report;
  for (size_t i = 0; i < family.size(); ++i) {
    if (family[i].dim() != family.front().dim())
      throw InputError("family members have different dimensions");
  }
  for (size_t i = 0; i < family.size(); ++i) {
    for (size_t j = i + 1; j < family.size(); ++j) {
      const ComplexMatrix &x = family[i].matrix();
      const ComplexMatrix &y = family[j].matrix();
      const double c = max_abs(x * y - y * x);
      const double ratio = c / (1.0 + x.norm() * y.norm());
      if (ratio > report.ratio) {
        report.ratio = ratio;
        report.norm = c;
        report.first = i;
        report.second = j;
      }
    }
  }
  report.commuting = report.ratio <= tol;
  return report;
}

inline bool is_commuting_family(std::span<const HermitianMatrix> family,
                                double tol = 1e-8) {
  return commutator_report(family, tol).commuting;
}

//============================================================================
// Simultaneous diagonalization
//============================================================================

// diagonalizer^* A_i diagonalizer is diagonal with diagonal table.row(i).
struct SpectrumTable {
  Eigen::Index k = 0;
  Eigen::Index n = 0;
  ComplexMatrix diagonalizer;
  RealMatrix table;
};

namespace detail {

inline double offdiag_norm(const ComplexMatrix &m) {
  ComplexMatrix off = m;
  off.diagonal().setZero();
  return off.norm();
}

// Worst relative off-diagonal Frobenius mass of basis^* A_i basis.
inline double joint_residual(std::span<const HermitianMatrix> family,
                             const ComplexMatrix &basis) {
  double worst = 0.0;
  for (const HermitianMatrix &a : family) {
    const double scale = std::max(a.matrix().norm(),
                                  std::numeric_limits<double>::min());
    const double r =
        offdiag_norm(basis.adjoint() * a.matrix() * basis) / scale;
    worst = std::max(worst, r);
  }
  return worst;
}

// Refines `basis` (orthonormal columns spanning an invariant subspace of every
// family member) until each member is diagonal in it. Recurses into clusters
// of the random combination when that combination was degenerate.
inline ComplexMatrix refine_subspace(std::span<const HermitianMatrix> family,
                                     const ComplexMatrix &basis,
                                     std::mt19937_64 &rng, double tol,
                                     int depth, int max_depth) {
  const Eigen::Index d = basis.cols();
  if (d <= 1)
    return basis;

  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  ComplexMatrix comb = ComplexMatrix::Zero(d, d);
  double scale = 0.0;
  for (const HermitianMatrix &a : family) {
    const ComplexMatrix restricted = basis.adjoint() * a.matrix() * basis;
    comb += coeff(rng) * restricted;
    scale = std::max(scale, max_abs(restricted));
  }
  comb = (comb + comb.adjoint()) * 0.5;
  const EigenDecomposition local = eig_sorted(comb);
  ComplexMatrix refined = basis * local.basis;

  if (joint_residual(family, refined) <= tol)
    return refined;
  if (depth >= max_depth)
    return refined;

  // Split into clusters of (numerically) equal combination eigenvalues and
  // diagonalize each one with a fresh combination.
  const double gap = 1e-6 * std::max(scale, std::numeric_limits<double>::min());
  Eigen::Index start = 0;
  for (Eigen::Index j = 1; j <= d; ++j) {
    if (j == d || std::abs(local.values(j) - local.values(j - 1)) > gap) {
      if (j - start > 1) {
        ComplexMatrix block = refined.middleCols(start, j - start);
        refined.middleCols(start, j - start) =
            refine_subspace(family, block, rng, tol, depth + 1, max_depth);
      }
      start = j;
    }
  }
  return refined;
}

} // namespace detail

// Jointly diagonalizes a commuting Hermitian family. A single matrix goes
// straight to eig_hermitian; larger families diagonalize a seeded random real
// combination and recurse inside degenerate clusters (at most `max_retries`
// levels). Throws NumericalError carrying the worst residual on failure.
inline SpectrumTable simultaneous_diagonalize(
    std::span<const HermitianMatrix> family, std::uint64_t seed = 0,
    double tol = 1e-8, int max_retries = 5) {
  if (family.empty())
    throw InputError("cannot diagonalize an empty family");
  const Eigen::Index n = family.front().dim();
  for (const HermitianMatrix &a : family) {
    if (a.dim() != n)
      throw InputError("family members have different dimensions");
  }

  SpectrumTable out;
  out.k = static_cast<Eigen::Index>(family.size());
  out.n = n;
  if (family.size() == 1) {
    EigenDecomposition e = eig_hermitian(family.front(), tol);
    out.diagonalizer = std::move(e.basis);
    out.table = e.values.transpose();
    return out;
  }

  std::mt19937_64 rng(seed);
  ComplexMatrix basis = ComplexMatrix::Identity(n, n);
  basis = detail::refine_subspace(family, basis, rng, tol, 0, max_retries);
  const double residual = detail::joint_residual(family, basis);
  if (residual > tol)
    throw NumericalError("joint diagonalization residual above tolerance",
                         residual);

  out.diagonalizer = std::move(basis);
  out.table.resize(out.k, n);
  for (Eigen::Index i = 0; i < out.k; ++i) {
    const ComplexMatrix d = out.diagonalizer.adjoint() *
                            family[static_cast<size_t>(i)].matrix() *
                            out.diagonalizer;
    out.table.row(i) = d.diagonal().real().transpose();
  }
  return out;
}

//============================================================================
// Pinching
//============================================================================

// (1/n) sum_{j=1}^{n} (P^j)^* C P^j with P = diag(1, w, ..., w^{n-1}),
// w = exp(2 pi i / n). Equals the diagonal part of C.
inline ComplexMatrix pinch_average(const ComplexMatrix &c) {
  if (c.rows() != c.cols())
    throw InputError("pinch_average expects a square matrix");
  const Eigen::Index n = c.rows();
  if (n == 0)
    return c;
  ComplexVector phases(n);
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 1; j <= n; ++j) {
    for (Eigen::Index p = 0; p < n; ++p)
      phases(p) = std::polar(1.0, 2.0 * M_PI * static_cast<double>((p * j) % n) /
                                      static_cast<double>(n));
    // (P^j)^* C P^j has entries conj(phase_p) C_pq phase_q.
    acc += phases.conjugate().asDiagonal() * c * phases.asDiagonal();
  }
  return acc / static_cast<double>(n);
}

// diag(1, w, ..., w^{n-1}) raised to `power`.
inline ComplexMatrix root_of_unity_power(Eigen::Index n, Eigen::Index power) {
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (Eigen::Index q = 0; q < n; ++q)
    p(q, q) = std::polar(1.0, 2.0 * M_PI * static_cast<double>((q * power) % n) /
                                  static_cast<double>(n));
  return p;
}

} // namespace cpinterp
