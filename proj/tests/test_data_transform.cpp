#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "grcausal/data_transform.hpp"
#include "grcausal/error.hpp"

using namespace grcausal;

namespace {

std::vector<double> sample(std::size_t n, std::uint64_t seed, bool skewed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (double& x : v) x = skewed ? std::exp(normal(rng)) : normal(rng);
  return v;
}

// Two-sample Kolmogorov-Smirnov distance.
double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<double> all(a);
  all.insert(all.end(), b.begin(), b.end());
  double d = 0.0;
  for (double t : all) {
    const double fa = static_cast<double>(std::upper_bound(a.begin(), a.end(), t) - a.begin()) / a.size();
    const double fb = static_cast<double>(std::upper_bound(b.begin(), b.end(), t) - b.begin()) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace

TEST(Standardize, HandComputed) {
  const std::vector<double> v{1.0, 2.0, 3.0};
  const auto s = standardize(v);
  EXPECT_NEAR(s[0], -1.224745, 1e-6);
  EXPECT_NEAR(s[1], 0.0, 1e-15);
  EXPECT_NEAR(s[2], 1.224745, 1e-6);
}

TEST(Standardize, IdempotentAndAffineInvariant) {
  const auto v = sample(100, 1, false);
  const auto s = standardize(v);
  const auto ss = standardize(s);
  std::vector<double> affine(v);
  for (double& x : affine) x = 3.5 * x - 7.0;
  const auto sa = standardize(affine);
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_NEAR(ss[i], s[i], 1e-12);
    EXPECT_NEAR(sa[i], s[i], 1e-12);
  }
}

TEST(Standardize, ZeroVariance) {
  const std::vector<double> flat(5, 1.0);
  try {
    standardize(flat);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateInput);
  }
}

TEST(TieFraction, CountsRepeats) {
  const std::vector<double> v{1.0, 1.0, 2.0, 3.0, 3.0, 3.0, 4.0, 5.0, 6.0, 7.0};
  EXPECT_DOUBLE_EQ(tie_fraction(v), 0.3);
}

TEST(Pit, EqualSizeRankMatching) {
  const std::vector<double> x{1.0, 2.0, 3.0};
  const std::vector<double> y{10.0, 20.0, 30.0};
  const auto t = pit_transform(x, y);
  EXPECT_DOUBLE_EQ(t[0], 10.0);
  EXPECT_DOUBLE_EQ(t[1], 20.0);
  EXPECT_DOUBLE_EQ(t[2], 30.0);
}

TEST(Pit, IdentityWhenDistributionsMatch) {
  const auto x = sample(200, 2, false);
  std::vector<double> y(x);
  std::shuffle(y.begin(), y.end(), std::mt19937_64(3));
  const auto t = pit_transform(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(t[i], x[i], 1e-12);
}

TEST(Pit, InvariantUnderMonotoneMaps) {
  const auto x = sample(150, 4, false);
  const auto y = sample(150, 5, true);
  std::vector<double> mx(x);
  for (double& v : mx) v = std::exp(2.0 * v) + v * v * v;
  EXPECT_EQ(pit_transform(x, y), pit_transform(mx, y));
}

TEST(Pit, MatchesTargetMarginal) {
  const auto x = sample(300, 6, false);
  const auto y = sample(300, 7, true);
  EXPECT_LE(ks_distance(pit_transform(x, y), y), 1.0 / 300.0 + 1e-12);
}

TEST(Pit, StandardizationCommutesUpToAffineMap) {
  const auto x = sample(120, 8, true);
  const auto y = sample(120, 9, true);
  const auto plain = pit_transform(x, y);
  const auto stdz = pit_transform(standardize(x), standardize(y));
  // stdz = (plain - mean(y)) / sd(y)
  const auto sy = standardize(y);
  const double scale = (y[1] - y[0]) / (sy[1] - sy[0]);
  const double shift = y[0] - scale * sy[0];
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(scale * stdz[i] + shift, plain[i], 1e-9);
}

TEST(Pit, TiesRejected) {
  std::vector<double> x = sample(100, 10, false);
  const std::vector<double> y = sample(100, 11, false);
  x[1] = x[0];
  x[2] = x[0];  // 2% repeated
  try {
    pit_transform(x, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TiesError);
  }
  EXPECT_NO_THROW(pit_transform(x, y, 0.05));
}

TEST(ValidatePair, Contract) {
  SamplePair p;
  p.x = sample(20, 1, false);
  p.y = sample(20, 2, false);
  EXPECT_NO_THROW(validate_pair(p));
  p.y.pop_back();
  EXPECT_THROW(validate_pair(p), Error);
  p.x.pop_back();
  try {
    validate_pair(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
  }
}
