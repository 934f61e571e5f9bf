#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace grcausal {

/// Paired observations of two scalar variables.
struct SamplePair {
  std::vector<double> x;
  std::vector<double> y;
  std::string x_label = "x";
  std::string y_label = "y";

  std::size_t size() const { return x.size(); }
};

inline constexpr std::size_t kDefaultMinPairSize = 20;
inline constexpr double kDefaultTieThreshold = 0.01;

/// Throws unless both sides are finite, equally long and at least
/// `min_size` long.
void validate_pair(const SamplePair& pair, std::size_t min_size = kDefaultMinPairSize);

/// Zero mean, unit population variance.
std::vector<double> standardize(std::span<const double> v);

/// Fraction of entries that repeat an earlier value: (N - distinct) / N.
double tie_fraction(std::span<const double> v);

/// x̃_i = F̂_y^-1(F̂_x(x_i)) with midrank ECDF (rank - 0.5) / N and a
/// linearly interpolated quantile function of y. Throws TiesError when
/// either side repeats more than `tie_threshold` of its values.
std::vector<double> pit_transform(std::span<const double> x, std::span<const double> y,
                                  double tie_threshold = kDefaultTieThreshold);

}  // namespace grcausal
