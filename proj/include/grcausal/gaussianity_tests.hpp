#pragma once

#include <cstddef>
#include <span>

namespace grcausal {

enum class ScoreMethod { Energy, Kurtosis, Entropy };

struct GaussianityScore {
  ScoreMethod method = ScoreMethod::Energy;
  double value = 0.0;
  std::size_t n = 0;
};

// Expectations against a standard normal Y.
double normal_pdf(double a);
double normal_cdf(double a);
/// E|a - Y| = a (2 Φ(a) - 1) + 2 φ(a).
double expected_abs_deviation(double a);
/// E|Y - Y'| = 2 / sqrt(pi).
double expected_normal_pair_distance();

/// Energy goodness-of-fit statistic against N(0, 1):
/// N (2/N Σ E|z_j - Y| - E|Y - Y'| - 1/N² Σ |z_j - z_k|).
GaussianityScore energy_statistic(std::span<const double> z);

/// |m4 / m2² - 3| from central sample moments.
GaussianityScore kurtosis_score(std::span<const double> z);

/// Kozachenko-Leonenko k-nearest-neighbour differential entropy (nats).
/// Duplicate values get a deterministic jitter of 1e-10 sd before the search.
GaussianityScore knn_entropy(std::span<const double> z, std::size_t k = 10);

}  // namespace grcausal
