#include "grcausal/causal_inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "grcausal/error.hpp"
#include "grcausal/gaussianity_tests.hpp"
#include "grcausal/kernel_regression.hpp"
#include "grcausal/residual_whitening.hpp"

namespace grcausal {
namespace {

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = std::exp(a + t * (b - a));
  }
  return out;
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::GRAN: return "gran";
    case Method::GRANStar: return "gran-star";
    case Method::GRK4: return "grk4";
    case Method::GRENT: return "grent";
  }
  return "unknown";
}

std::string_view to_string(Direction d) { return d == Direction::XCausesY ? "x->y" : "y->x"; }

Method parse_method(std::string_view name) {
  for (Method m : {Method::GRAN, Method::GRANStar, Method::GRK4, Method::GRENT})
    if (to_string(m) == name) return m;
  fail(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

void validate(const InferenceConfig& cfg) {
  if (cfg.gamma_grid.empty() || cfg.tau_grid.empty())
    if (cfg.grid_size < 2) fail(ErrorCode::InvalidArgument, "grid size must be at least 2");
  if (cfg.folds < 2) fail(ErrorCode::InvalidArgument, "at least 2 folds are required");
  for (double g : cfg.gamma_grid)
    if (!(g > 0.0) || !std::isfinite(g)) fail(ErrorCode::InvalidArgument, "bandwidth grid must be positive");
  for (double t : cfg.tau_grid)
    if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorCode::InvalidArgument, "ridge grid must be positive");
  if (cfg.entropy_neighbors < 1) fail(ErrorCode::InvalidArgument, "entropy needs at least one neighbour");
}

std::vector<double> bandwidth_grid(std::span<const double> regressor, const InferenceConfig& cfg) {
  if (!cfg.gamma_grid.empty()) return sorted_unique(cfg.gamma_grid);
  const double med = median_pairwise_sq_distance(regressor);
  if (!(med > 0.0)) fail(ErrorCode::DegenerateInput, "regressor has zero median pairwise distance");
  std::vector<double> grid = log_spaced(std::ldexp(1.0, -4), std::ldexp(1.0, 5), cfg.grid_size);
  for (double& g : grid) g /= med;
  return grid;
}

std::vector<double> ridge_grid(const InferenceConfig& cfg) {
  if (!cfg.tau_grid.empty()) return sorted_unique(cfg.tau_grid);
  return log_spaced(1e-3, 10.0, cfg.grid_size);
}

std::vector<std::vector<Eigen::Index>> cv_folds(std::size_t n, std::size_t folds, std::uint64_t seed) {
  if (folds < 2 || n < folds) fail(ErrorCode::InsufficientData, "need at least as many samples as folds");
  std::vector<Eigen::Index> perm(n);
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<Eigen::Index>> out(folds);
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t lo = f * n / folds;
    const std::size_t hi = (f + 1) * n / folds;
    out[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(lo), perm.begin() + static_cast<std::ptrdiff_t>(hi));
    std::sort(out[f].begin(), out[f].end());
  }
  return out;
}

HyperParameters grid_search_cv(std::span<const double> x, std::span<const double> y, const InferenceConfig& cfg) {
  validate(cfg);
  if (x.size() != y.size()) fail(ErrorCode::InvalidArgument, "x and y lengths differ");
  const std::size_t n = x.size();
  const auto folds = cv_folds(n, cfg.folds, cfg.seed);
  const std::vector<double> gammas = bandwidth_grid(x, cfg);
  const std::vector<double> taus = ridge_grid(cfg);

  // Complement of each held-out block.
  std::vector<std::vector<Eigen::Index>> train(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<char> held(n, 0);
    for (auto i : folds[f]) held[static_cast<std::size_t>(i)] = 1;
    for (std::size_t i = 0; i < n; ++i)
      if (!held[i]) train[f].push_back(static_cast<Eigen::Index>(i));
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  // score[t][g]; NaN marks a degenerate grid cell.
  std::vector<std::vector<double>> score(taus.size(), std::vector<double>(gammas.size(), 0.0));

  for (std::size_t g = 0; g < gammas.size(); ++g) {
    const Matrix kxx = gram_matrix(x, gammas[g], cfg.max_gram_order).values;
    const Matrix kyy = gram_matrix(y, gammas[g], cfg.max_gram_order).values;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const auto& tr = train[f];
      const auto& te = folds[f];
      const Matrix kxx_tr = kxx(tr, tr);
      const Matrix kyy_tr = kyy(tr, tr);
      HoldoutBlocks blocks{center_cross_gram(kxx(te, tr), kxx_tr), center_cross_gram(kyy(te, tr), kyy_tr),
                           center_new_gram(kyy(te, te), kyy(te, tr), kyy_tr)};
      const Matrix kxx_c = center_gram(kxx_tr);
      const Matrix kyy_c = center_gram(kyy_tr);
      const double var = target_variance(blocks);
      for (std::size_t t = 0; t < taus.size(); ++t) {
        if (std::isnan(score[t][g])) continue;
        if (!(var > 0.0)) {
          score[t][g] = nan;
          continue;
        }
        try {
          const double err = holdout_error_direct(kxx_c, kyy_c, taus[t], blocks);
          score[t][g] += explained_variance(err, te.size(), var);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NumericalError) throw;
          score[t][g] = nan;
        }
      }
    }
  }

  HyperParameters best;
  bool found = false;
  for (std::size_t t = 0; t < taus.size(); ++t)
    for (std::size_t g = 0; g < gammas.size(); ++g) {
      const double s = score[t][g];
      if (std::isnan(s)) continue;
      const double mean = s / static_cast<double>(folds.size());
      if (!found || mean > best.cv_explained_variance) {
        best = {gammas[g], taus[t], mean};
        found = true;
      }
    }
  if (!found) fail(ErrorCode::NumericalError, "every grid point was degenerate");
  return best;
}

double residual_score(std::span<const double> z, const InferenceConfig& cfg) {
  switch (cfg.method) {
    case Method::GRAN:
    case Method::GRANStar: return energy_statistic(z).value;
    case Method::GRK4: return kurtosis_score(z).value;
    case Method::GRENT: return -knn_entropy(z, cfg.entropy_neighbors).value;
  }
  fail(ErrorCode::InvalidArgument, "unknown method");
}

DirectionalFit fit_direction(std::span<const double> cause, std::span<const double> effect,
                             const InferenceConfig& cfg, const HyperParameters* forced) {
  DirectionalFit out;
  out.hyper = forced ? *forced : grid_search_cv(cause, effect, cfg);
  const KernelModel model = fit_samples(cause, effect, out.hyper.gamma, out.hyper.tau, cfg.max_gram_order);
  const WhitenedResiduals w = whiten(center_gram(residual_gram(model)));
  out.first_component.assign(w.first.data(), w.first.data() + w.first.size());
  out.retained = w.retained;
  out.first_share = variance_profile(w)(0);
  out.score = residual_score(out.first_component, cfg);
  return out;
}

GapResult gaussianization_gap(std::span<const double> a, std::span<const double> b, const InferenceConfig& cfg) {
  if (a.size() != b.size()) fail(ErrorCode::InvalidArgument, "a and b lengths differ");
  GapResult r;
  r.forward = fit_direction(a, b, cfg);
  r.backward = fit_direction(b, a, cfg);
  const double n = static_cast<double>(a.size());
  r.gap = r.forward.score / n - r.backward.score / n;
  return r;
}

DirectionDecision infer_direction(const SamplePair& pair, const InferenceConfig& cfg) {
  validate(cfg);
  validate_pair(pair, cfg.min_samples);
  const std::vector<double> xs = standardize(pair.x);
  const std::vector<double> ys = standardize(pair.y);

  DirectionDecision d;
  if (cfg.method == Method::GRANStar) {
    // Without the marginal transform both branches are the same two fits.
    const GapResult g = gaussianization_gap(xs, ys, cfg);
    d.g_xtilde = g.gap;
    d.g_ytilde = -g.gap;
    d.stats = {g.forward.score, g.backward.score, g.backward.score, g.forward.score};
    d.hyper = {g.forward.hyper, g.backward.hyper, g.backward.hyper, g.forward.hyper};
  } else {
    const std::vector<double> xt = pit_transform(xs, ys, cfg.tie_threshold);
    const std::vector<double> yt = pit_transform(ys, xs, cfg.tie_threshold);
    const GapResult gx = gaussianization_gap(xt, ys, cfg);
    const GapResult gy = gaussianization_gap(yt, xs, cfg);
    d.g_xtilde = gx.gap;
    d.g_ytilde = gy.gap;
    d.stats = {gx.forward.score, gx.backward.score, gy.forward.score, gy.backward.score};
    d.hyper = {gx.forward.hyper, gx.backward.hyper, gy.forward.hyper, gy.backward.hyper};
  }

  if (std::abs(d.g_xtilde) >= std::abs(d.g_ytilde))
    d.direction = d.g_xtilde > 0.0 ? Direction::XCausesY : Direction::YCausesX;
  else
    d.direction = d.g_ytilde > 0.0 ? Direction::YCausesX : Direction::XCausesY;
  d.confidence = std::max(std::abs(d.g_xtilde), std::abs(d.g_ytilde));
  return d;
}

}  // namespace grcausal
