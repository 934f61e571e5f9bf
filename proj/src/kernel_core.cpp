#include "grcausal/kernel_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "grcausal/error.hpp"

namespace grcausal {
namespace {

// exp(x) is subnormal below about -708.4; flush a little earlier.
constexpr double kMinExponent = -700.0;

void check_bandwidth(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    fail(ErrorCode::InvalidArgument, "kernel bandwidth must be positive and finite");
}

void check_finite(std::span<const double> xs) {
  for (double v : xs)
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "non-finite kernel input");
}

inline double se_unchecked(double a, double b, double gamma) {
  const double d = a - b;
  const double e = -gamma * d * d;
  return e < kMinExponent ? 0.0 : std::exp(e);
}

}  // namespace

double se_kernel(double a, double b, double gamma) {
  check_bandwidth(gamma);
  if (!std::isfinite(a) || !std::isfinite(b))
    fail(ErrorCode::InvalidArgument, "non-finite kernel input");
  return se_unchecked(a, b, gamma);
}

GramMatrix gram_matrix(std::span<const double> xs, double gamma, std::size_t max_order) {
  check_bandwidth(gamma);
  if (xs.size() < 2) fail(ErrorCode::InsufficientData, "Gram matrix needs at least 2 points");
  if (xs.size() > max_order)
    fail(ErrorCode::ResourceLimit,
         "Gram order " + std::to_string(xs.size()) + " exceeds cap " + std::to_string(max_order));
  check_finite(xs);

  const auto n = static_cast<Eigen::Index>(xs.size());
  Matrix k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    k(j, j) = 1.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = se_unchecked(xs[i], xs[j], gamma);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return {std::move(k), gamma};
}

CrossGramMatrix cross_gram_matrix(std::span<const double> new_points,
                                  std::span<const double> train_points, double gamma) {
  check_bandwidth(gamma);
  check_finite(new_points);
  check_finite(train_points);
  const auto m = static_cast<Eigen::Index>(new_points.size());
  const auto n = static_cast<Eigen::Index>(train_points.size());
  Matrix k(m, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < m; ++i) k(i, j) = se_unchecked(new_points[i], train_points[j], gamma);
  return {std::move(k), gamma};
}

Matrix center_gram(const Matrix& k) {
  if (k.rows() != k.cols()) fail(ErrorCode::InvalidArgument, "center_gram needs a square matrix");
  const Vector col_means = k.colwise().mean().transpose();
  const Vector row_means = k.rowwise().mean();
  const double grand = k.mean();
  Matrix out = k;
  out.colwise() -= row_means;
  out.rowwise() -= col_means.transpose();
  out.array() += grand;
  return out;
}

GramMatrix center_gram(const GramMatrix& k) { return {center_gram(k.values), k.bandwidth}; }

Matrix center_cross_gram(const Matrix& k_new, const Matrix& k_train) {
  if (k_train.rows() != k_train.cols() || k_new.cols() != k_train.rows())
    fail(ErrorCode::InvalidArgument, "cross Gram columns must match the training Gram order");
  // M_N K_train has every row equal to the column means of K_train.
  const Vector train_col_means = k_train.colwise().mean().transpose();
  const Vector new_row_means = k_new.rowwise().mean();
  const double grand = k_train.mean();
  Matrix out = k_new;
  out.rowwise() -= train_col_means.transpose();
  out.colwise() -= new_row_means;
  out.array() += grand;
  return out;
}

CrossGramMatrix center_cross_gram(const CrossGramMatrix& k_new, const GramMatrix& k_train) {
  return {center_cross_gram(k_new.values, k_train.values), k_new.bandwidth};
}

Matrix center_new_gram(const Matrix& k_new_new, const Matrix& k_new_train, const Matrix& k_train) {
  if (k_new_new.rows() != k_new_new.cols() || k_new_train.rows() != k_new_new.rows() ||
      k_new_train.cols() != k_train.rows() || k_train.rows() != k_train.cols())
    fail(ErrorCode::InvalidArgument, "inconsistent block sizes for new-data centering");
  const Vector new_row_means = k_new_train.rowwise().mean();
  const double grand = k_train.mean();
  Matrix out = k_new_new;
  out.colwise() -= new_row_means;
  out.rowwise() -= new_row_means.transpose();
  out.array() += grand;
  return out;
}

double median_pairwise_sq_distance(std::span<const double> xs) {
  if (xs.size() < 2) fail(ErrorCode::InsufficientData, "median distance needs at least 2 points");
  std::vector<double> d;
  d.reserve(xs.size() * (xs.size() - 1) / 2);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double diff = xs[i] - xs[j];
      d.push_back(diff * diff);
    }
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  if (d.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(d.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace grcausal
