#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace grcausal {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Largest Gram order accepted by default. All downstream costs are cubic.
inline constexpr std::size_t kDefaultMaxGramOrder = 2000;

/// Square kernel matrix together with the bandwidth that produced it.
struct GramMatrix {
  Matrix values;
  double bandwidth = 0.0;

  Eigen::Index order() const { return values.rows(); }
};

/// Kernel evaluations between M new points (rows) and N training points.
struct CrossGramMatrix {
  Matrix values;
  double bandwidth = 0.0;
};

/// exp(-gamma * (a - b)^2). Exponents below the subnormal range are
/// flushed to exactly zero.
double se_kernel(double a, double b, double gamma);

GramMatrix gram_matrix(std::span<const double> xs, double gamma,
                       std::size_t max_order = kDefaultMaxGramOrder);

CrossGramMatrix cross_gram_matrix(std::span<const double> new_points,
                                  std::span<const double> train_points,
                                  double gamma);

/// K - 1_N K - K 1_N + 1_N K 1_N, with 1_N the N x N matrix of entries 1/N.
Matrix center_gram(const Matrix& k);
GramMatrix center_gram(const GramMatrix& k);

/// Centers a cross block using only the training averages:
/// K_new - M_N K_train - K_new 1_N + M_N K_train 1_N.
Matrix center_cross_gram(const Matrix& k_new, const Matrix& k_train);
CrossGramMatrix center_cross_gram(const CrossGramMatrix& k_new,
                                  const GramMatrix& k_train);

/// Centers the new-vs-new block:
/// K_nn - M_N K_new_trainᵀ - K_new_train M_Nᵀ + M_N K_train M_Nᵀ.
/// `k_new_train` is the uncentered M x N cross block.
Matrix center_new_gram(const Matrix& k_new_new, const Matrix& k_new_train,
                       const Matrix& k_train);

/// Median of (x_i - x_j)^2 over all i < j.
double median_pairwise_sq_distance(std::span<const double> xs);

}  // namespace grcausal
