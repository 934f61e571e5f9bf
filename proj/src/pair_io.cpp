#include "grcausal/pair_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "grcausal/error.hpp"

namespace grcausal {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_number(std::string_view tok, std::size_t line_no, const std::string& source) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    std::ostringstream os;
    os << source << ": line " << line_no << ": invalid number '" << tok << "'";
    fail(ErrorCode::ParseError, os.str());
  }
  return v;
}

}  // namespace

PairFile parse_pair(std::istream& in, const std::string& source_name, std::size_t min_rows, double tie_threshold) {
  PairFile pf;
  pf.path = source_name;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const auto toks = tokenize(line);
    if (toks.empty() || toks.front().front() == '#') continue;
    if (toks.size() != 2) {
      std::ostringstream os;
      os << source_name << ": line " << line_no << ": expected 2 columns, found " << toks.size();
      fail(ErrorCode::ParseError, os.str());
    }
    pf.pair.x.push_back(parse_number(toks[0], line_no, source_name));
    pf.pair.y.push_back(parse_number(toks[1], line_no, source_name));
  }
  pf.line_count = line_no;
  if (pf.pair.x.size() < min_rows) {
    std::ostringstream os;
    os << source_name << ": " << pf.pair.x.size() << " data rows, at least " << min_rows << " required";
    fail(ErrorCode::InsufficientData, os.str());
  }
  pf.tie_fraction_x = tie_fraction(pf.pair.x);
  pf.tie_fraction_y = tie_fraction(pf.pair.y);
  for (const auto& [name, frac] : {std::pair{"x", pf.tie_fraction_x}, std::pair{"y", pf.tie_fraction_y}}) {
    if (frac > tie_threshold) {
      std::ostringstream os;
      os << "column " << name << " repeats " << frac * 100.0 << "% of its values (limit "
         << tie_threshold * 100.0 << "%)";
      pf.warnings.push_back(os.str());
    }
  }
  return pf;
}

PairFile load_pair(const std::string& path, std::size_t min_rows, double tie_threshold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  return parse_pair(in, path, min_rows, tie_threshold);
}

void write_pair(std::ostream& out, const SamplePair& pair) {
  if (pair.x.size() != pair.y.size()) fail(ErrorCode::InvalidArgument, "paired samples have different lengths");
  out << "# " << pair.x_label << ' ' << pair.y_label << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < pair.x.size(); ++i) out << pair.x[i] << ' ' << pair.y[i] << '\n';
}

void save_pair(const std::string& path, const SamplePair& pair) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  write_pair(out, pair);
  if (!out) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

DecisionRateCurve decision_rate_curve(std::span<const DecisionResult> results) {
  if (results.empty()) fail(ErrorCode::InvalidArgument, "decision-rate curve needs results");
  std::vector<std::size_t> order(results.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return results[a].confidence > results[b].confidence; });
  DecisionRateCurve c;
  const double total = static_cast<double>(results.size());
  std::size_t correct = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const DecisionResult& r = results[order[k]];
    if (r.correct) ++correct;
    c.thresholds.push_back(r.confidence);
    c.decision_fraction.push_back(static_cast<double>(k + 1) / total);
    c.accuracy.push_back(static_cast<double>(correct) / static_cast<double>(k + 1));
  }
  return c;
}

std::string format_csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace grcausal
