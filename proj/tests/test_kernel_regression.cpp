#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "feature_oracle.hpp"
#include "grcausal/error.hpp"
#include "grcausal/kernel_core.hpp"
#include "grcausal/kernel_regression.hpp"

using namespace grcausal;

namespace {

GramMatrix as_gram(const Matrix& m) { return {m, 0.0}; }

struct PolySystem {
  KernelModel model;
  HoldoutBlocks blocks;
  oracle::FeatureRidge ridge;
  oracle::Instance inst;
};

PolySystem poly_system(std::uint64_t seed, std::size_t n = 50, std::size_t m = 15) {
  PolySystem s;
  s.inst = oracle::random_instance(seed, n, m);
  const auto& in = s.inst;
  const Matrix kxx = oracle::poly_gram(in.x, in.x);
  const Matrix kyy = oracle::poly_gram(in.y, in.y);
  s.model = fit(as_gram(center_gram(kxx)), as_gram(center_gram(kyy)), in.tau);
  s.blocks.kx_new = center_cross_gram(oracle::poly_gram(in.x_new, in.x), kxx);
  s.blocks.ky_new = center_cross_gram(oracle::poly_gram(in.y_new, in.y), kyy);
  s.blocks.ky_newnew = center_new_gram(oracle::poly_gram(in.y_new, in.y_new), oracle::poly_gram(in.y_new, in.y), kyy);
  s.ridge = oracle::feature_ridge(in.x, in.y, in.tau);
  return s;
}

std::vector<double> normal_sample(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return v;
}

}  // namespace

TEST(Fit, DiagonalSolves) {
  const Matrix id = Matrix::Identity(2, 2);
  EXPECT_TRUE(fit(as_gram(id), as_gram(id), 1.0).v.isApprox(0.5 * id));
  EXPECT_TRUE(fit(as_gram(Matrix::Zero(2, 2)), as_gram(id), 2.0).v.isApprox(0.5 * id));
}

TEST(Fit, MatchesDenseSolve) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  Matrix b(20, 20);
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = normal(rng);
  const Matrix k = b * b.transpose() / 20.0;
  Matrix a = k;
  a.diagonal().array() += 0.1;
  const Matrix expected = a.fullPivLu().solve(Matrix::Identity(20, 20));
  EXPECT_LT((fit(as_gram(k), as_gram(k), 0.1).v - expected).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Fit, RejectsBadTau) {
  const Matrix id = Matrix::Identity(2, 2);
  EXPECT_THROW(fit(as_gram(id), as_gram(id), 0.0), Error);
  EXPECT_THROW(fit(as_gram(id), as_gram(id), -1.0), Error);
}

TEST(SpectralFactor, RidgeInverseForAnyTau) {
  const auto xs = normal_sample(30, 9);
  const Matrix k = center_gram(gram_matrix(xs, 0.5).values);
  const SpectralFactor sf(k);
  for (double tau : {1e-3, 0.1, 10.0}) {
    Matrix a = k;
    a.diagonal().array() += tau;
    EXPECT_LT((sf.ridge_inverse(tau) * a - Matrix::Identity(30, 30)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(ResidualGram, MatchesFeatureOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PolySystem s = poly_system(seed);
    const Matrix expected = oracle::residual_gram(s.ridge);
    EXPECT_LT((residual_gram(s.model) - expected).cwiseAbs().maxCoeff(), 1e-8) << "seed " << seed;
  }
}

TEST(ResidualGram, InterpolationLimit) {
  const auto xs = normal_sample(15, 2);
  const GramMatrix k = center_gram(gram_matrix(xs, 2.0));
  const KernelModel m = fit(k, k, 1e-12);
  EXPECT_LT(residual_gram(m).trace() / 15.0, 1e-6);
}

TEST(ResidualGram, HeavyRidgeKeepsTargets) {
  const auto xs = normal_sample(20, 3);
  const auto ys = normal_sample(20, 4);
  const GramMatrix kx = center_gram(gram_matrix(xs, 1.0));
  const GramMatrix ky = center_gram(gram_matrix(ys, 1.0));
  const KernelModel m = fit(kx, ky, 1e12);
  EXPECT_LT((residual_gram(m) - ky.values).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(HoldoutError, MatchesFeatureOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PolySystem s = poly_system(seed);
    const double expected = oracle::holdout_error(s.ridge, s.inst.x_new, s.inst.y_new);
    EXPECT_NEAR(holdout_error(s.model, s.blocks), expected, 1e-8 * std::max(1.0, expected)) << "seed " << seed;
    EXPECT_NEAR(holdout_error_direct(s.model.kxx, s.model.kyy, s.model.tau, s.blocks), expected,
                1e-8 * std::max(1.0, expected));
  }
}

TEST(HoldoutError, TrainingSplitEqualsResidualTrace) {
  const oracle::Instance in = oracle::random_instance(42, 30, 1);
  const double gamma = 0.7;
  const KernelModel m = fit_samples(in.x, in.y, gamma, 0.3);
  const HoldoutBlocks b = holdout_blocks(in.x, in.y, in.x, in.y, gamma);
  EXPECT_NEAR(holdout_error(m, b), residual_gram(m).trace(), 1e-8);
}

TEST(HoldoutError, InterpolationAndZeroModelLimits) {
  const auto xs = normal_sample(15, 6);
  const double gamma = 2.0;
  const KernelModel interp = fit_samples(xs, xs, gamma, 1e-12);
  const HoldoutBlocks same = holdout_blocks(xs, xs, xs, xs, gamma);
  EXPECT_LT(holdout_error(interp, same) / 15.0, 1e-6);

  const auto ys = normal_sample(15, 7);
  const auto xn = normal_sample(6, 8);
  const auto yn = normal_sample(6, 9);
  const KernelModel flat = fit_samples(xs, ys, gamma, 1e12);
  const HoldoutBlocks b = holdout_blocks(xs, ys, xn, yn, gamma);
  EXPECT_NEAR(holdout_error(flat, b) / 6.0, target_variance(b), 1e-9);
}

TEST(ExplainedVariance, Endpoints) {
  EXPECT_DOUBLE_EQ(explained_variance(0.0, 10, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(explained_variance(20.0, 10, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(explained_variance(40.0, 10, 2.0), -1.0);
  EXPECT_THROW(explained_variance(1.0, 10, 0.0), Error);
}

TEST(ExplainedVariance, InvariantUnderRelabeling) {
  const oracle::Instance in = oracle::random_instance(8, 40, 12);
  const double gamma = 0.4;
  const KernelModel m = fit_samples(in.x, in.y, gamma, 0.2);
  auto xn = in.x_new;
  auto yn = in.y_new;
  const HoldoutBlocks b1 = holdout_blocks(in.x, in.y, xn, yn, gamma);
  std::reverse(xn.begin(), xn.end());
  std::reverse(yn.begin(), yn.end());
  const HoldoutBlocks b2 = holdout_blocks(in.x, in.y, xn, yn, gamma);
  EXPECT_NEAR(explained_variance(holdout_error(m, b1), 12, target_variance(b1)),
              explained_variance(holdout_error(m, b2), 12, target_variance(b2)), 1e-12);
}

TEST(Preimage, TrainingPointMapsToItsTarget) {
  const auto xs = normal_sample(25, 10);
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = 0.5 * xs[i] + std::sin(xs[i]);
  const KernelModel m = fit_samples(xs, ys, 1.0, 1e-12);
  for (std::size_t i : {0u, 7u, 13u}) EXPECT_NEAR(preimage(m, xs[i]).value, ys[i], 0.05) << i;
}

TEST(Preimage, SymmetricDataMapsZeroNearZero) {
  std::vector<double> xs, ys;
  for (int i = -10; i <= 10; ++i) {
    xs.push_back(0.2 * i);
    ys.push_back(std::tanh(0.2 * i));
  }
  const KernelModel m = fit_samples(xs, ys, 1.0, 1e-3);
  EXPECT_NEAR(preimage(m, 0.0).value, 0.0, 1e-3);
}

TEST(Preimage, FindsGlobalMinimumAndRespectsOddSymmetry) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (int i = 0; i < 60; ++i) {
    const double x = -1.5 + 3.0 * i / 59.0;
    xs.push_back(x);
    ys.push_back(x * x * x);
  }
  const KernelModel m = fit_samples(xs, ys, 1.0, 1e-3);
  for (int i = 0; i < 9; ++i) {
    const double x = -1.3 + 2.6 * i / 8.0;
    const Vector alpha = preimage_weights(m, x);
    double best_u = 0.0, best = std::numeric_limits<double>::infinity();
    for (int k = -4000; k <= 4000; ++k) {
      const double o = preimage_objective(m, alpha, 1e-3 * k);
      if (o < best) {
        best = o;
        best_u = 1e-3 * k;
      }
    }
    const PreimageResult r = preimage(m, x);
    EXPECT_LE(r.objective, best + 1e-9) << x;
    EXPECT_NEAR(r.value, best_u, 2e-3) << x;
    EXPECT_NEAR(preimage(m, -x).value, -r.value, 1e-6) << x;
  }
  EXPECT_LT(preimage(m, -1.3).value, -1.5);
  EXPECT_GT(preimage(m, 1.3).value, 1.5);
}

TEST(Preimage, WeightsSumToOneAndObjectiveMatchesDistance) {
  const oracle::Instance in = oracle::random_instance(3, 20, 1);
  const KernelModel m = fit_samples(in.x, in.y, 0.5, 0.1);
  const Vector alpha = preimage_weights(m, 0.3);
  EXPECT_NEAR(alpha.sum(), 1.0, 1e-12);
  // Up to the constant ‖prediction‖², the objective is the feature distance.
  const double u = 0.4;
  double cross = 0.0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) cross += alpha(i) * se_kernel(m.y_train(i), u, m.gamma);
  EXPECT_NEAR(preimage_objective(m, alpha, u), 1.0 - 2.0 * cross, 1e-12);
}

TEST(Preimage, RequiresSamples) {
  const Matrix id = Matrix::Identity(3, 3);
  EXPECT_THROW(preimage(fit(as_gram(id), as_gram(id), 1.0), 0.0), Error);
}
