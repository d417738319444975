#include "hallbounds/tensor_core.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace hallbounds;

TEST(RotGenerator, MapsBasisVectorsAndIsAntisymmetric) {
  const Matrix3 J = rot_generator();
  EXPECT_TRUE(J * Vector3::UnitX() == Vector3::UnitY());
  EXPECT_TRUE(J * Vector3::UnitY() == -Vector3::UnitX());
  EXPECT_TRUE(J * Vector3::UnitZ() == Vector3::Zero());
  EXPECT_DOUBLE_EQ((J + J.transpose()).norm(), 0.0);
}

TEST(TiConductivity, MatrixRoundTrip) {
  const TIConductivity p{4.0, 2.0, -1.5};
  const Matrix3 m = ti_to_matrix(p);
  EXPECT_DOUBLE_EQ(m(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(m(1, 1), 4.0);
  EXPECT_DOUBLE_EQ(m(2, 2), 2.0);
  EXPECT_DOUBLE_EQ(m(0, 1), 1.5);
  EXPECT_DOUBLE_EQ(m(1, 0), -1.5);
  const TIConductivity q = matrix_to_ti(m);
  EXPECT_DOUBLE_EQ(q.a, p.a);
  EXPECT_DOUBLE_EQ(q.b, p.b);
  EXPECT_DOUBLE_EQ(q.c, p.c);
}

TEST(TiConductivity, PatternViolationRejected) {
  Matrix3 m = ti_to_matrix({2.0, 1.0, 0.5});
  m(0, 2) = 1e-3;
  EXPECT_THROW(matrix_to_ti(m), InputError);
  m(0, 2) = 1e-12;
  EXPECT_NO_THROW(matrix_to_ti(m, 1e-9));
}

TEST(TiConductivity, ValidationRejectsNonPositiveAndNonFinite) {
  EXPECT_THROW((TIConductivity{0.0, 1.0, 0.0}).validate(), InputError);
  EXPECT_THROW((TIConductivity{1.0, -2.0, 0.0}).validate(), InputError);
  EXPECT_THROW((TIConductivity{1.0, 1.0, std::nan("")}).validate(), InputError);
  EXPECT_NO_THROW((TIConductivity{1.0, 1.0, -3.0}).validate());
}

TEST(SymAntisymSplit, ReassemblesAndHasCorrectSymmetry) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix3 m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = hbtest::gaussian(rng);
    const auto [S, A] = sym_antisym_split(m);
    EXPECT_LT((S + A - m).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((S - S.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((A + A.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(PhaseDistribution, WeightValidation) {
  PhaseDistribution d;
  EXPECT_THROW(d.validate(), InputError);  // empty
  d.entries = {{0.5, {1, 1, 0}}, {0.5, {2, 2, 0}}};
  EXPECT_NO_THROW(d.validate());
  d.entries[0].weight = 0.4;
  EXPECT_THROW(d.validate(), InputError);  // sums to 0.9
  d.entries = {{1.2, {1, 1, 0}}, {-0.2, {2, 2, 0}}};
  EXPECT_THROW(d.validate(), InputError);  // negative weight
}

TEST(BlockForm, TransverselyIsotropicPattern) {
  const double a = 2.0, b = 3.0, c = 0.5;
  const Matrix6 L = build_block_L(TIConductivity{a, b, c});
  Matrix6 expected = Matrix6::Zero();
  expected(0, 0) = expected(1, 1) = 1.0 / a;
  expected(2, 2) = 1.0 / b;
  expected(3, 3) = expected(4, 4) = a + c * c / a;
  expected(5, 5) = b;
  expected(0, 4) = expected(4, 0) = c / a;
  expected(1, 3) = expected(3, 1) = -c / a;
  EXPECT_LT((L - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((L - L.transpose()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(BlockForm, SymmetricInputGivesBlockDiagonal) {
  Matrix3 s;
  s << 3.0, 0.2, 0.0, 0.2, 2.0, 0.1, 0.0, 0.1, 1.5;
  const Matrix6 L = build_block_L(s);
  EXPECT_LT((L.topRightCorner<3, 3>()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((L.topLeftCorner<3, 3>() - s.inverse()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((L.bottomRightCorner<3, 3>() - s).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(BlockForm, RejectsIndefiniteSymmetricPart) {
  Matrix3 s = Matrix3::Identity();
  s(2, 2) = -1.0;
  EXPECT_THROW(build_block_L(s), InputError);
}

TEST(BlockForm, IsPositiveDefiniteForValidConductivity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const TIConductivity p{hbtest::uniform(rng, 0.1, 10.0), hbtest::uniform(rng, 0.1, 10.0),
                           hbtest::uniform(rng, -5.0, 5.0)};
    const Matrix6 L = build_block_L(p);
    Eigen::SelfAdjointEigenSolver<Matrix6> es(L, Eigen::EigenvaluesOnly);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(PsdOrder, MarginAndCheck) {
  const Matrix6 I = Matrix6::Identity();
  EXPECT_NEAR(psd_order_margin(I, 2.0 * I), 1.0, 1e-14);
  EXPECT_TRUE(psd_order_check(I, 2.0 * I));
  EXPECT_FALSE(psd_order_check(2.0 * I, I));
  EXPECT_TRUE(psd_order_check(I, I));  // boundary counts as ordered
}

TEST(PsdOrder, RejectsAsymmetricInput) {
  Matrix6 m = Matrix6::Identity();
  m(0, 1) = 0.5;
  EXPECT_THROW(psd_order_margin(m, Matrix6::Identity()), InputError);
}

TEST(Delta12, UpperLeftMinor) {
  Matrix3 m;
  m << 2.0, 3.0, 9.0, 4.0, 5.0, 9.0, 9.0, 9.0, 9.0;
  EXPECT_DOUBLE_EQ(delta12(m), 2.0 * 5.0 - 3.0 * 4.0);
}
