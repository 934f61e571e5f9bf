#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "grcausal/data_transform.hpp"
#include "grcausal/kernel_core.hpp"

namespace grcausal {

/// Decision rule variants. GRAN scores whitened residuals with the energy
/// statistic; GRANStar does the same without equalizing the marginals;
/// GRK4 uses |excess kurtosis|; GRENT uses negated kNN entropy.
enum class Method { GRAN, GRANStar, GRK4, GRENT };

enum class Direction { XCausesY, YCausesX };

std::string_view to_string(Method m);
std::string_view to_string(Direction d);
Method parse_method(std::string_view name);

struct InferenceConfig {
  Method method = Method::GRAN;
  std::size_t grid_size = 10;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  // Explicit absolute grids. When empty the bandwidths are 2^-4 .. 2^5 times
  // the inverse median squared pairwise distance of the regressor, and tau is
  // log-spaced over [1e-3, 10].
  std::vector<double> gamma_grid;
  std::vector<double> tau_grid;
  std::size_t entropy_neighbors = 10;
  double tie_threshold = kDefaultTieThreshold;
  std::size_t min_samples = kDefaultMinPairSize;
  std::size_t max_gram_order = kDefaultMaxGramOrder;
};

void validate(const InferenceConfig& cfg);

std::vector<double> bandwidth_grid(std::span<const double> regressor, const InferenceConfig& cfg);
std::vector<double> ridge_grid(const InferenceConfig& cfg);

/// Deterministic fold assignment: a seeded permutation cut into contiguous
/// blocks. Element f holds the held-out indices of fold f.
std::vector<std::vector<Eigen::Index>> cv_folds(std::size_t n, std::size_t folds, std::uint64_t seed);

struct HyperParameters {
  double gamma = 0.0;
  double tau = 0.0;
  double cv_explained_variance = 0.0;
};

/// Maximizes mean held-out explained variance over the (gamma, tau) grid.
/// Equal scores resolve to the smallest tau, then the smallest gamma.
HyperParameters grid_search_cv(std::span<const double> x, std::span<const double> y,
                               const InferenceConfig& cfg);

/// Scores a whitened first principal component; larger means less Gaussian
/// for every method.
double residual_score(std::span<const double> z, const InferenceConfig& cfg);

/// One regression direction: tuned fit, whitened residuals and their score.
struct DirectionalFit {
  HyperParameters hyper;
  double score = 0.0;
  std::vector<double> first_component;
  std::size_t retained = 0;
  double first_share = 0.0;  // fraction of residual variance on the first component
};

DirectionalFit fit_direction(std::span<const double> cause, std::span<const double> effect,
                             const InferenceConfig& cfg, const HyperParameters* forced = nullptr);

struct GapResult {
  double gap = 0.0;
  DirectionalFit forward;   // a -> b
  DirectionalFit backward;  // b -> a
};

/// score(z_{a->b}) / N - score(z_{b->a}) / N.
GapResult gaussianization_gap(std::span<const double> a, std::span<const double> b,
                              const InferenceConfig& cfg);

struct DirectionDecision {
  Direction direction = Direction::XCausesY;
  double confidence = 0.0;
  double g_xtilde = 0.0;
  double g_ytilde = 0.0;
  // Per-fit scores and hyper-parameters, ordered
  // x̃ -> y, y -> x̃, ỹ -> x, x -> ỹ.
  std::array<double, 4> stats{};
  std::array<HyperParameters, 4> hyper{};
};

DirectionDecision infer_direction(const SamplePair& pair, const InferenceConfig& cfg);

}  // namespace grcausal
