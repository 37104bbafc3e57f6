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

#include <gtest/gtest.h>

#include "cpinterp/cpinterp.hpp"
#include "support/random.hpp"

using namespace cpinterp;
using namespace cpinterp::testkit;

namespace {

ComplexMatrix diag(std::initializer_list<Complex> xs) {
  ComplexVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (Complex x : xs)
    v(i++) = x;
  return v.asDiagonal();
}

} // namespace

TEST(ApplyMap, IdentityAndPinching) {
  Rng rng(163);
  const ComplexMatrix x = random_gaussian(4, 4, rng);
  EXPECT_EQ(max_abs(apply_map(KrausMap::identity(4), x) - x), 0.0);
  const ComplexMatrix want = x.diagonal().asDiagonal();
  EXPECT_EQ(max_abs(apply_map(KrausMap::pinching(4), x) - want), 0.0);
}

TEST(ApplyMap, ShapeMismatch) {
  EXPECT_THROW(apply_map(KrausMap::identity(2), ComplexMatrix::Zero(3, 3)), InputError);
}

TEST(ApplyMap, StackedAndBlockTraceForms) {
  Rng rng(167);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = uniform_int(rng, 1, 5), m = uniform_int(rng, 1, 5);
    const KrausMap k = random_kraus(n, m, uniform_int(rng, 1, 4), rng);
    const ComplexMatrix x = random_gaussian(n, n, rng);
    const ComplexMatrix y = apply_map(k, x);
    EXPECT_LE(max_abs(apply_stacked(k, x) - y), 1e-10);
    EXPECT_LE(max_abs(apply_block_trace(k, x) - y), 1e-10);
  }
}

TEST(ApplyMap, HermitianPreserving) {
  Rng rng(173);
  const KrausMap k = random_kraus(4, 3, 3, rng);
  const ComplexMatrix y = apply_map(k, random_hermitian(4, rng));
  EXPECT_LE(max_abs(y - y.adjoint()), 1e-14);
}

TEST(Choi, IdentityChannelIsRankOne) {
  const ChoiMatrix c = choi_matrix(KrausMap::identity(2));
  const auto e = detail::eig_sorted(c.matrix);
  EXPECT_NEAR(c.matrix.trace().real(), 2.0, 1e-14);
  EXPECT_EQ(numerical_rank(e.values), 1);
  EXPECT_NEAR(e.values(0), 2.0, 1e-14);
}

TEST(Choi, PinchingHasDiagonalPattern) {
  const ChoiMatrix c = choi_matrix(KrausMap::pinching(2));
  ComplexMatrix want = ComplexMatrix::Zero(4, 4);
  want(0, 0) = 1; // E_00 (x) E_00
  want(3, 3) = 1; // E_11 (x) E_11
  EXPECT_LE(max_abs(c.matrix - want), 1e-15);
  EXPECT_EQ(numerical_rank(detail::eig_sorted(c.matrix).values), 2);
}

TEST(Choi, MatchesMatrixUnitDefinition) {
  Rng rng(179);
  const KrausMap k = random_kraus(3, 2, 3, rng);
  EXPECT_LE(max_abs(choi_matrix(k).matrix - choi_matrix_by_units(k).matrix), 1e-13);
}

TEST(Choi, RandomMapsArePositive) {
  Rng rng(181);
  for (int trial = 0; trial < 20; ++trial) {
    const KrausMap k = random_kraus(uniform_int(rng, 1, 5), uniform_int(rng, 1, 5),
                                    uniform_int(rng, 1, 4), rng);
    EXPECT_GE(lambda_min(choi_matrix(k).matrix), -1e-9);
  }
}

TEST(KrausFromChoi, IdentityGivesScaledIdentity) {
  const KrausMap k = kraus_from_choi(choi_matrix(KrausMap::identity(3)));
  ASSERT_EQ(k.size(), 1u);
  const ComplexMatrix f = k.operators()[0];
  EXPECT_LE(max_abs(f.adjoint() * f - ComplexMatrix::Identity(3, 3)), 1e-12);
  EXPECT_LE(max_abs(f - f(0, 0) * ComplexMatrix::Identity(3, 3)), 1e-12);
}

TEST(KrausFromChoi, PinchingRoundTrip) {
  const ChoiMatrix c = choi_matrix(KrausMap::pinching(2));
  const KrausMap k = kraus_from_choi(c);
  EXPECT_EQ(k.size(), 2u);
  EXPECT_LE(max_abs(choi_matrix(k).matrix - c.matrix), 1e-12);
}

TEST(KrausFromChoi, RandomRoundTrip) {
  Rng rng(191);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = uniform_int(rng, 1, 6), m = uniform_int(rng, 1, 6);
    const Index r = uniform_int(rng, 1, 4);
    const KrausMap k = random_kraus(n, m, r, rng);
    const ChoiMatrix c = choi_matrix(k);
    const KrausMap back = kraus_from_choi(c);
    EXPECT_LE(max_abs(choi_matrix(back).matrix - c.matrix), 1e-8);
    EXPECT_LE(back.size(), size_t(std::min(r, n * m)));
  }
}

TEST(KrausFromChoi, RejectsNonPositive) {
  ChoiMatrix c{1, 2, ComplexMatrix::Zero(2, 2)};
  c.matrix(0, 0) = 1;
  c.matrix(1, 1) = -1;
  EXPECT_THROW(kraus_from_choi(c), InputError);
}

TEST(CheckProperties, IdentityChannel) {
  Rng rng(193);
  const ComplexMatrix h = random_hermitian(3, rng);
  const auto rep = check_properties(KrausMap::identity(3), {{h, h}});
  EXPECT_TRUE(rep.is_cp);
  EXPECT_TRUE(rep.is_unital);
  EXPECT_TRUE(rep.is_tp);
  EXPECT_EQ(rep.max_interpolation_residual(), 0.0);
  EXPECT_EQ(rep.kraus_rank, 1);
}

TEST(CheckProperties, ExampleTracePreservingMap) {
  RealMatrix d = RealMatrix::Zero(4, 4);
  d.leftCols(2).setConstant(0.5);
  const KrausMap k = kraus_from_transfer(TransferMatrix{d, StochasticClass::RowStochastic},
                                         ComplexMatrix::Identity(4, 4),
                                         ComplexMatrix::Identity(4, 4));
  const auto rep = check_properties(k, {{diag({4, 1, 1, 0}), diag({3, 3, 0, 0})}});
  EXPECT_TRUE(rep.is_cp);
  EXPECT_TRUE(rep.is_tp);
  EXPECT_FALSE(rep.is_unital);
  EXPECT_LE(rep.max_interpolation_residual(), 1e-8);
}

TEST(CheckProperties, PlantedClassPropertiesHold) {
  Rng rng(197);
  for (int trial = 0; trial < 20; ++trial) {
    const StochasticClass c = kAllClasses[size_t(trial % 4)];
    const auto inst = planted_instance(uniform_int(rng, 1, 5), uniform_int(rng, 1, 5),
                                       uniform_int(rng, 1, 3), c, rng);
    const KrausMap k = kraus_from_transfer(TransferMatrix{inst.d, c}, inst.qa,
                                           inst.qb.adjoint());
    const auto rep = check_properties(k, inst.pairs());
    EXPECT_TRUE(rep.is_cp);
    EXPECT_LE(rep.max_interpolation_residual(), 1e-8);
    if (needs_column_sums(c)) {
      EXPECT_TRUE(rep.is_unital);
    }
    if (needs_row_sums(c)) {
      EXPECT_TRUE(rep.is_tp);
    }
  }
}

TEST(CheckProperties, DualSwapsUnitalAndTracePreserving) {
  Rng rng(199);
  for (int trial = 0; trial < 20; ++trial) {
    const StochasticClass c = kAllClasses[size_t(trial % 4)];
    const Index n = uniform_int(rng, 1, 5);
    const Index m = c == StochasticClass::DoublyStochastic ? n : uniform_int(rng, 1, 5);
    const KrausMap k = kraus_from_transfer(
        TransferMatrix{random_class_matrix(n, m, c, rng), c}, random_unitary(n, rng),
        random_unitary(m, rng));
    const auto r1 = check_properties(k, {});
    const auto r2 = check_properties(dual_map(k), {});
    if (r1.unital_residual < 1e-9) {
      EXPECT_TRUE(r2.is_tp);
    }
    if (r1.tp_residual < 1e-9) {
      EXPECT_TRUE(r2.is_unital);
    }
    EXPECT_NEAR(r1.unital_residual, r2.tp_residual, 1e-12);
    EXPECT_NEAR(r1.tp_residual, r2.unital_residual, 1e-12);
  }
}

TEST(Numrange, IdentitySupportIsOne) {
  const auto s = numrange_support(ComplexMatrix::Identity(3, 3), {0.0});
  EXPECT_NEAR(s[0], 1.0, 1e-14);
  // W(I) = {1}: support in direction theta is cos(theta)
  const auto s2 = numrange_support(ComplexMatrix::Identity(3, 3), {M_PI / 3});
  EXPECT_NEAR(s2[0], 0.5, 1e-14);
}

TEST(Numrange, SegmentSupport) {
  const auto s = numrange_support(diag({0, 2}), {0.0, M_PI});
  EXPECT_NEAR(s[0], 2.0, 1e-14);
  EXPECT_NEAR(s[1], 0.0, 1e-14);
}

TEST(Numrange, NormalMatrixMatchesHull) {
  Rng rng(211);
  const auto angles = uniform_angles(360);
  for (int trial = 0; trial < 10; ++trial) {
    ComplexVector ev;
    const ComplexMatrix t = random_normal(uniform_int(rng, 1, 6), rng, &ev);
    const auto s = numrange_support(t, angles);
    for (size_t i = 0; i < angles.size(); ++i)
      EXPECT_NEAR(s[i], hull_support(ev, angles[i]), 1e-8);
  }
}

TEST(Numrange, ContainmentExamples) {
  Rng rng(223);
  const ComplexMatrix a = random_gaussian(3, 3, rng);
  EXPECT_TRUE(numrange_contained(a, a));
  EXPECT_FALSE(numrange_contained(diag({3}), diag({0, 2})));
  const Complex w = std::polar(1.0, 2 * M_PI / 3);
  const ComplexMatrix roots = diag({1.0, w, w * w});
  EXPECT_TRUE(numrange_contained(diag({0}), roots));
  EXPECT_FALSE(numrange_contained(diag({1.0, w, w * w}) * 1.1, roots));
}

TEST(Numrange, InvariantUnderJointConjugation) {
  Rng rng(227);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = uniform_int(rng, 1, 5);
    const ComplexMatrix a = random_gaussian(n, n, rng);
    const ComplexMatrix b = 0.5 * random_gaussian(n, n, rng);
    const ComplexMatrix u = random_unitary(n, rng);
    const auto r1 = numrange_compare(b, a);
    const auto r2 = numrange_compare(u.adjoint() * b * u, u.adjoint() * a * u);
    EXPECT_EQ(r1.contained, r2.contained);
    EXPECT_NEAR(r1.worst_margin, r2.worst_margin, r1.tol);
  }
}

TEST(Numrange, ReducibilityHeuristic) {
  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a(0, 1) = 1;
  a(2, 2) = 2;
  EXPECT_LE(reducibility_residual(a), 1e-12);
  ComplexMatrix jordan = ComplexMatrix::Zero(3, 3);
  jordan(0, 1) = 1;
  jordan(1, 2) = 1;
  EXPECT_GT(reducibility_residual(jordan), 0.1);
}
