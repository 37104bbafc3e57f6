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

// Seeded generators shared by the unit and acceptance tests.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "cpinterp/cpinterp.hpp"

namespace cpinterp::testkit {

using Rng = std::mt19937_64;
using Eigen::Index;

inline double uniform(Rng &rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Index uniform_int(Rng &rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

inline ComplexMatrix random_gaussian(Index rows, Index cols, Rng &rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      m(i, j) = Complex(g(rng), g(rng));
  return m;
}

// Haar-distributed unitary: QR of a complex Gaussian with R's diagonal phases
// folded back into Q.
inline ComplexMatrix random_unitary(Index n, Rng &rng) {
  const ComplexMatrix z = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0)
      q.col(j) *= r(j, j) / mag;
  }
  return q;
}

inline ComplexMatrix random_hermitian(Index n, Rng &rng) {
  const ComplexMatrix g = random_gaussian(n, n, rng);
  return (g + g.adjoint()) * 0.5;
}

inline RealVector random_vector(Index n, Rng &rng, double lo = -2.0,
                                double hi = 2.0) {
  RealVector v(n);
  for (Index i = 0; i < n; ++i)
    v(i) = uniform(rng, lo, hi);
  return v;
}

// Entries drawn uniformly from a finite list of values.
inline RealVector grid_vector(Index n, Rng &rng, const std::vector<double> &values) {
  RealVector v(n);
  for (Index i = 0; i < n; ++i)
    v(i) = values[static_cast<size_t>(
        uniform_int(rng, 0, static_cast<Index>(values.size()) - 1))];
  return v;
}

inline std::vector<Index> random_permutation(Index n, Rng &rng) {
  std::vector<Index> p(static_cast<size_t>(n));
  std::iota(p.begin(), p.end(), Index{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline RealMatrix permutation_matrix(const std::vector<Index> &p) {
  return BirkhoffDecomposition::permutation_matrix(p);
}

// Convex combination of `terms` random permutations with random weights.
inline RealMatrix random_doubly_stochastic(Index n, Rng &rng, Index terms = 5) {
  RealVector w(terms);
  for (Index l = 0; l < terms; ++l)
    w(l) = uniform(rng, 0.05, 1.0);
  w /= w.sum();
  RealMatrix d = RealMatrix::Zero(n, n);
  for (Index l = 0; l < terms; ++l)
    d += w(l) * permutation_matrix(random_permutation(n, rng));
  return d;
}

// Random nonnegative n x m matrix of the given class; about a quarter of the
// entries are zero for the non-doubly classes.
inline RealMatrix random_class_matrix(Index n, Index m, StochasticClass c,
                                      Rng &rng) {
  if (c == StochasticClass::DoublyStochastic)
    return random_doubly_stochastic(n, rng, uniform_int(rng, 1, 5));
  RealMatrix d(n, m);
  for (Index p = 0; p < n; ++p)
    for (Index q = 0; q < m; ++q)
      d(p, q) = uniform(rng) < 0.25 ? 0.0 : uniform(rng, 0.1, 1.0);
  if (c == StochasticClass::ColumnStochastic) {
    for (Index q = 0; q < m; ++q) {
      if (d.col(q).sum() == 0.0)
        d(uniform_int(rng, 0, n - 1), q) = 1.0;
      d.col(q) /= d.col(q).sum();
    }
  } else if (c == StochasticClass::RowStochastic) {
    for (Index p = 0; p < n; ++p) {
      if (d.row(p).sum() == 0.0)
        d(p, uniform_int(rng, 0, m - 1)) = 1.0;
      d.row(p) /= d.row(p).sum();
    }
  }
  return d;
}

inline KrausMap random_kraus(Index n, Index m, Index r, Rng &rng) {
  std::vector<ComplexMatrix> ops;
  for (Index j = 0; j < r; ++j)
    ops.push_back(random_gaussian(n, m, rng) / std::sqrt(static_cast<double>(n * r)));
  return KrausMap(n, m, std::move(ops));
}

// Commuting families A_i = Q_a diag(a_i) Q_a^*, B_i = Q_b diag(b_i) Q_b^* with
// the b table planted as a_table * D for a random D of class `cls`.
struct PlantedInstance {
  StochasticClass cls = StochasticClass::Nonnegative;
  RealMatrix a_table, b_table, d;
  ComplexMatrix qa, qb;
  std::vector<HermitianMatrix> a, b;

  std::vector<MatrixPair> pairs() const {
    std::vector<MatrixPair> out;
    for (size_t i = 0; i < a.size(); ++i)
      out.emplace_back(a[i].matrix(), b[i].matrix());
    return out;
  }
};

inline std::vector<HermitianMatrix> family_from_table(const RealMatrix &table,
                                                      const ComplexMatrix &q) {
  std::vector<HermitianMatrix> out;
  for (Index i = 0; i < table.rows(); ++i) {
    const ComplexMatrix diag =
        table.row(i).transpose().cast<Complex>().asDiagonal();
    out.push_back(HermitianMatrix::symmetrized(q * diag * q.adjoint()));
  }
  return out;
}

inline PlantedInstance planted_instance(Index n, Index m, Index k,
                                        StochasticClass cls, Rng &rng) {
  PlantedInstance inst;
  inst.cls = cls;
  if (cls == StochasticClass::DoublyStochastic)
    m = n;
  inst.a_table.resize(k, n);
  for (Index i = 0; i < k; ++i)
    inst.a_table.row(i) = random_vector(n, rng).transpose();
  inst.d = random_class_matrix(n, m, cls, rng);
  inst.b_table = inst.a_table * inst.d;
  inst.qa = random_unitary(n, rng);
  inst.qb = random_unitary(m, rng);
  inst.a = family_from_table(inst.a_table, inst.qa);
  inst.b = family_from_table(inst.b_table, inst.qb);
  return inst;
}

inline ComplexMatrix random_normal(Index n, Rng &rng, ComplexVector *eigenvalues = nullptr) {
  ComplexVector ev(n);
  for (Index i = 0; i < n; ++i)
    ev(i) = Complex(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0));
  const ComplexMatrix q = random_unitary(n, rng);
  if (eigenvalues)
    *eigenvalues = ev;
  return q * ev.asDiagonal() * q.adjoint();
}

// Support function of the convex hull of a finite point set.
inline double hull_support(const ComplexVector &points, double theta) {
  double best = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < points.size(); ++i)
    best = std::max(best, std::real(std::polar(1.0, -theta) * points(i)));
  return best;
}

} // namespace cpinterp::testkit
