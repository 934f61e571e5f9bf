#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "grcausal/data_transform.hpp"

namespace grcausal {

/// A parsed two-column pair file. Data lines hold two whitespace-separated
/// numbers; lines starting with '#' and blank lines are skipped.
struct PairFile {
  std::string path;
  SamplePair pair;
  std::size_t line_count = 0;  // physical lines read
  double tie_fraction_x = 0.0;
  double tie_fraction_y = 0.0;
  std::vector<std::string> warnings;
};

PairFile parse_pair(std::istream& in, const std::string& source_name,
                    std::size_t min_rows = kDefaultMinPairSize, double tie_threshold = kDefaultTieThreshold);
PairFile load_pair(const std::string& path, std::size_t min_rows = kDefaultMinPairSize,
                   double tie_threshold = kDefaultTieThreshold);

/// Writes a pair file at full round-trip precision.
void write_pair(std::ostream& out, const SamplePair& pair);
void save_pair(const std::string& path, const SamplePair& pair);

struct DecisionResult {
  bool correct = false;
  double confidence = 0.0;
};

/// Accuracy among the k most confident decisions, for every k.
struct DecisionRateCurve {
  std::vector<double> thresholds;         // confidence of the k-th decision, descending
  std::vector<double> decision_fraction;  // k / total
  std::vector<double> accuracy;           // correct among the first k
};

/// Stable sort by descending confidence, then prefix accuracies.
DecisionRateCurve decision_rate_curve(std::span<const DecisionResult> results);

/// Six significant digits, the CSV number format.
std::string format_csv_number(double v);

}  // namespace grcausal
