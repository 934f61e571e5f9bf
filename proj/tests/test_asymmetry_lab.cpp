#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "grcausal/asymmetry_lab.hpp"
#include "grcausal/error.hpp"

using namespace grcausal;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST(CumulantFactor, LowOrdersAreOne) {
  EXPECT_NEAR(cumulant_factor(0.7, 1), 1.0, 1e-15);
  EXPECT_NEAR(cumulant_factor(0.7, 2), 1.0, 1e-15);
  EXPECT_EQ(cumulant_factor(0.0, 3), 1.0);
}

TEST(CumulantFactor, KnownValues) {
  EXPECT_NEAR(cumulant_factor(0.5, 3), 0.357143, 1e-6);
  EXPECT_NEAR(cumulant_factor(0.5, 4), 0.4, 1e-12);
}

TEST(CumulantFactor, BoundedAndEvenSymmetric) {
  for (int n = 3; n <= 8; ++n)
    for (int i = -99; i <= 99; ++i) {
      const double w = 0.01 * i;
      EXPECT_LE(std::abs(cumulant_factor(w, n)), 1.0 + 1e-12) << n << ' ' << w;
      if (n % 2 == 0) EXPECT_NEAR(cumulant_factor(w, n), cumulant_factor(-w, n), 1e-15);
    }
}

TEST(CumulantFactor, Domain) {
  EXPECT_THROW(cumulant_factor(1.0, 3), Error);
  EXPECT_THROW(cumulant_factor(0.5, 0), Error);
}

TEST(Kronecker, PowersAndCap) {
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  const Matrix k2 = kronecker_power(a, 2);
  EXPECT_EQ(k2.rows(), 4);
  EXPECT_EQ(k2(1, 3), 2 * 4);
  EXPECT_EQ(k2(3, 2), 4 * 3);
  EXPECT_EQ(kronecker_power(a, 1), a);
  try {
    kronecker_power(Matrix::Identity(5, 5), 6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ResourceLimit);
  }
}

TEST(MixingMatrix, RejectsNonContractions) {
  EXPECT_THROW(MixingMatrix::from(Matrix::Identity(2, 2)), Error);
  EXPECT_THROW(MixingMatrix::from(Matrix::Zero(2, 3)), Error);
  EXPECT_TRUE(MixingMatrix::from(diag2(0.3, -0.2)).symmetric);
}

TEST(BuildMn, LowOrdersHaveUnitNormForSymmetricA) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::vector<double> eig{0.9, -0.2};
    const MixingMatrix a = MixingMatrix::from(random_symmetric_matrix(eig, seed));
    EXPECT_NEAR(build_mn(a, 1).op_norm, 1.0, 1e-9);
    EXPECT_NEAR(build_mn(a, 2).op_norm, 1.0, 1e-9);
  }
}

TEST(BuildMn, FirstOrderCanExceedOneForNonSymmetricA) {
  // A = [[0, 0.9], [0, 0]] gives M_1 = (I - Aᵀ)(I + A) = [[1, 0.9], [-0.9, 0.19]],
  // whose determinant is 1 and squared Frobenius norm 2.6561.
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 0.9;
  const double f = 2.6561;
  const double top = std::sqrt((f + std::sqrt(f * f - 4.0)) / 2.0);
  EXPECT_NEAR(build_mn(MixingMatrix::from(a), 1).op_norm, top, 1e-12);
  EXPECT_GT(top, 1.4);
}

TEST(BuildMn, ScalarCaseMatchesFactor) {
  for (double w : {-0.8, -0.3, 0.4, 0.9}) {
    Matrix a(1, 1);
    a(0, 0) = w;
    for (int n = 3; n <= 8; ++n)
      EXPECT_NEAR(build_mn(MixingMatrix::from(a), n).op_norm, std::abs(cumulant_factor(w, n)), 1e-10);
  }
}

TEST(BuildMn, SymmetricExample) {
  EXPECT_NEAR(build_mn(MixingMatrix::from(diag2(0.5, 0.5)), 3).op_norm, 0.357143, 1e-6);
}

TEST(SymmetricOpNorm, KnownValuesAndAgreement) {
  const std::vector<double> zero{0.0, 0.0};
  for (int n = 1; n <= 6; ++n) EXPECT_NEAR(symmetric_op_norm(zero, n), 1.0, 1e-15);
  const std::vector<double> half{0.5, 0.5};
  EXPECT_NEAR(symmetric_op_norm(half, 3), 0.357143, 1e-6);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::vector<double> eig{0.8, -0.6};
    const MixingMatrix a = MixingMatrix::from(random_symmetric_matrix(eig, seed));
    for (int n = 3; n <= 5; ++n) EXPECT_NEAR(symmetric_op_norm(eig, n), build_mn(a, n).op_norm, 1e-9);
  }
}

TEST(SymmetricOpNorm, BoundedOnGrid) {
  for (int n = 3; n <= 8; ++n)
    for (int i = -19; i <= 19; ++i)
      for (int j = -19; j <= 19; ++j) {
        const std::vector<double> eig{0.05 * i, 0.05 * j};
        EXPECT_LE(symmetric_op_norm(eig, n), 1.0 + 1e-9);
      }
}

TEST(Determinants, IdentityHolds) {
  const auto [l0, r0] = determinant_identity_check(MixingMatrix::from(Matrix::Zero(3, 3)));
  EXPECT_EQ(l0, 1.0);
  EXPECT_EQ(r0, 1.0);
  const auto [ls, rs] = determinant_identity_check(MixingMatrix::from(diag2(0.4, -0.1)));
  EXPECT_EQ(ls, rs);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int d : {2, 3, 5})
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      std::vector<double> sv(static_cast<std::size_t>(d));
      for (double& s : sv) s = u(rng);
      const auto [l, r] = determinant_identity_check(MixingMatrix::from(random_mixing_matrix(sv, seed)));
      EXPECT_LT(std::abs(l - r) / std::max(std::abs(l), std::abs(r)), 1e-8);
    }
}

TEST(SecondCumulantRatio, IsOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::vector<double> sv{0.7, 0.1};
    EXPECT_NEAR(second_cumulant_ratio(MixingMatrix::from(random_mixing_matrix(sv, seed))), 1.0, 1e-9);
  }
}

TEST(GramCharlier, HermiteConstants) {
  // Closed forms 3/(8√π) and 15/(16√π).
  EXPECT_NEAR(hermite_moment_h2(), 0.75 / (2.0 * std::sqrt(M_PI)), 1e-9);
  EXPECT_NEAR(hermite_moment_h3(), 1.875 / (2.0 * std::sqrt(M_PI)), 1e-9);
}

TEST(GramCharlier, ZeroMonotoneAndShrinking) {
  EXPECT_EQ(gram_charlier_energy(0.0, 0.0), 0.0);
  EXPECT_LT(gram_charlier_energy(0.5, 1.0), gram_charlier_energy(0.6, 1.0));
  EXPECT_LT(gram_charlier_energy(-0.5, 1.0), gram_charlier_energy(-0.5, -1.2));
  for (double c3 : {-1.0, -0.4, 0.0, 0.7, 1.0})
    for (double c4 : {-0.9, 0.0, 0.3, 1.0})
      EXPECT_LE(gram_charlier_energy(c3 * 1.3, c4 * 2.1), gram_charlier_energy(1.3, 2.1) + 1e-15);
}

TEST(Projection, ScalarAndZeroCases) {
  Matrix a(1, 1);
  a(0, 0) = 0.6;
  EXPECT_NEAR(projected_shrinkage_check(MixingMatrix::from(a), 4).c, cumulant_factor(0.6, 4), 1e-12);
  const ProjectionCheck z = projected_shrinkage_check(MixingMatrix::from(Matrix::Zero(2, 2)), 3);
  EXPECT_NEAR(z.c, 1.0, 1e-12);
  EXPECT_TRUE(z.degenerate_top);
}

TEST(Projection, RandomSymmetricBelowOne) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::vector<double> eig{u(rng), u(rng)};
    const MixingMatrix a = MixingMatrix::from(random_symmetric_matrix(eig, seed));
    for (int n : {3, 4}) {
      const ProjectionCheck p = projected_shrinkage_check(a, n);
      EXPECT_LT(std::abs(p.c), 1.0);
      EXPECT_LT(p.residual, 1e-9);
    }
  }
  EXPECT_THROW(projected_shrinkage_check(MixingMatrix::from(random_mixing_matrix(std::vector<double>{0.5, 0.2}, 1)), 3),
               Error);
}

TEST(RandomMatrices, PrescribedSpectra) {
  const std::vector<double> sv{0.9, 0.4, 0.1};
  const Matrix a = random_mixing_matrix(sv, 5);
  const Vector s = Eigen::JacobiSVD<Matrix>(a).singularValues();
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(s(i), sv[static_cast<std::size_t>(i)], 1e-12);
  EXPECT_EQ(random_mixing_matrix(sv, 5), a);

  const std::vector<double> eig{-0.5, 0.3};
  Eigen::SelfAdjointEigenSolver<Matrix> es(random_symmetric_matrix(eig, 6));
  EXPECT_NEAR(es.eigenvalues()(0), -0.5, 1e-12);
  EXPECT_NEAR(es.eigenvalues()(1), 0.3, 1e-12);
}
