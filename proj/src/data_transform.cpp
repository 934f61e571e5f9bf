#include "grcausal/data_transform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "grcausal/error.hpp"

namespace grcausal {
namespace {

void check_finite(std::span<const double> v, const char* what) {
  for (double e : v)
    if (!std::isfinite(e)) fail(ErrorCode::InvalidArgument, std::string("non-finite value in ") + what);
}

// Midranks (1-based), ties share the average rank.
std::vector<double> midranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

// Order statistic y_(h) sits at probability (h - 0.5) / N.
double interpolated_quantile(const std::vector<double>& sorted, double p) {
  const double n = static_cast<double>(sorted.size());
  const double h = std::clamp(n * p + 0.5, 1.0, n);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  if (lo >= sorted.size()) return sorted.back();
  return sorted[lo - 1] + frac * (sorted[lo] - sorted[lo - 1]);
}

}  // namespace

void validate_pair(const SamplePair& pair, std::size_t min_size) {
  if (pair.x.size() != pair.y.size())
    fail(ErrorCode::InvalidArgument, "paired samples have different lengths");
  if (pair.x.size() < min_size) {
    std::ostringstream os;
    os << "pair has " << pair.x.size() << " samples, at least " << min_size << " required";
    fail(ErrorCode::InsufficientData, os.str());
  }
  check_finite(pair.x, "x");
  check_finite(pair.y, "y");
}

std::vector<double> standardize(std::span<const double> v) {
  if (v.empty()) fail(ErrorCode::InsufficientData, "cannot standardize an empty sample");
  check_finite(v, "sample");
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double e : v) ss += (e - mean) * (e - mean);
  const double sd = std::sqrt(ss / n);
  if (!(sd > 0.0)) fail(ErrorCode::DegenerateInput, "zero-variance sample");
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [&](double e) { return (e - mean) / sd; });
  return out;
}

double tie_fraction(std::span<const double> v) {
  if (v.empty()) return 0.0;
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  const auto distinct = static_cast<std::size_t>(std::distance(s.begin(), std::unique(s.begin(), s.end())));
  return static_cast<double>(v.size() - distinct) / static_cast<double>(v.size());
}

std::vector<double> pit_transform(std::span<const double> x, std::span<const double> y, double tie_threshold) {
  if (x.empty() || y.empty()) fail(ErrorCode::InsufficientData, "probability integral transform needs data");
  check_finite(x, "x");
  check_finite(y, "y");
  const double tx = tie_fraction(x);
  const double ty = tie_fraction(y);
  if (tx > tie_threshold || ty > tie_threshold) {
    std::ostringstream os;
    os << "repeated-value fraction (x " << tx << ", y " << ty << ") exceeds " << tie_threshold;
    fail(ErrorCode::TiesError, os.str());
  }

  std::vector<double> y_sorted(y.begin(), y.end());
  std::sort(y_sorted.begin(), y_sorted.end());
  const std::vector<double> ranks = midranks(x);
  const double n = static_cast<double>(x.size());

  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = interpolated_quantile(y_sorted, (ranks[i] - 0.5) / n);
  return out;
}

}  // namespace grcausal
