#include "grcausal/kernel_regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "grcausal/error.hpp"

namespace grcausal {
namespace {

constexpr double kNegativeTolerance = 1e-8;

double clamp_nonnegative(double value, const char* what) {
  if (value >= 0.0) return value;
  if (value >= -kNegativeTolerance) return 0.0;
  fail(ErrorCode::NumericalError, std::string(what) + " is negative beyond round-off");
}

void check_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    fail(ErrorCode::InvalidArgument, "ridge parameter tau must be positive");
}

void check_blocks(const HoldoutBlocks& b, Eigen::Index n) {
  const auto m = b.kx_new.rows();
  if (b.kx_new.cols() != n || b.ky_new.cols() != n || b.ky_new.rows() != m ||
      b.ky_newnew.rows() != m || b.ky_newnew.cols() != m)
    fail(ErrorCode::InvalidArgument, "held-out blocks do not match the training size");
}

// trace(Kyy_nn) - 2 trace(Ky_new Pᵀ) + trace(P Kyy Pᵀ) with P = Kx_new V.
double holdout_from_projection(const Matrix& p, const Matrix& kyy, const HoldoutBlocks& b) {
  const double t0 = b.ky_newnew.trace();
  const double t1 = (b.ky_new.array() * p.array()).sum();
  const double t2 = ((p * kyy).array() * p.array()).sum();
  return clamp_nonnegative(t0 - 2.0 * t1 + t2, "held-out error");
}

}  // namespace

SpectralFactor::SpectralFactor(const Matrix& k_centered) {
  if (k_centered.rows() != k_centered.cols())
    fail(ErrorCode::InvalidArgument, "spectral factor needs a square matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(k_centered);
  if (es.info() != Eigen::Success)
    fail(ErrorCode::NumericalError, "eigendecomposition of the training Gram failed");
  eigenvalues_ = es.eigenvalues().cwiseMax(0.0);
  eigenvectors_ = es.eigenvectors();
}

Matrix SpectralFactor::ridge_inverse(double tau) const {
  check_tau(tau);
  const Vector d = (eigenvalues_.array() + tau).inverse().matrix();
  return eigenvectors_ * d.asDiagonal() * eigenvectors_.transpose();
}

KernelModel fit(const SpectralFactor& factor, const GramMatrix& kxx_centered,
                const GramMatrix& kyy_centered, double tau) {
  check_tau(tau);
  if (kxx_centered.values.rows() != kyy_centered.values.rows() ||
      kyy_centered.values.rows() != kyy_centered.values.cols() ||
      factor.eigenvalues().size() != kxx_centered.values.rows())
    fail(ErrorCode::InvalidArgument, "Gram matrices must share one order");
  KernelModel model;
  model.v = factor.ridge_inverse(tau);
  model.v = 0.5 * (model.v + model.v.transpose());
  if (!model.v.allFinite()) fail(ErrorCode::NumericalError, "ridge inverse is not finite");
  model.tau = tau;
  model.gamma = kxx_centered.bandwidth;
  model.kxx = kxx_centered.values;
  model.kyy = kyy_centered.values;
  return model;
}

KernelModel fit(const GramMatrix& kxx_centered, const GramMatrix& kyy_centered, double tau) {
  check_tau(tau);
  return fit(SpectralFactor(kxx_centered.values), kxx_centered, kyy_centered, tau);
}

KernelModel fit_samples(std::span<const double> x, std::span<const double> y, double gamma,
                        double tau, std::size_t max_order) {
  if (x.size() != y.size()) fail(ErrorCode::InvalidArgument, "x and y lengths differ");
  const GramMatrix kxx = gram_matrix(x, gamma, max_order);
  const GramMatrix kyy = gram_matrix(y, gamma, max_order);
  KernelModel model = fit(center_gram(kxx), center_gram(kyy), tau);
  model.x_train = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
  model.y_train = Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size()));
  model.kxx_col_means = kxx.values.colwise().mean().transpose();
  model.kxx_grand_mean = kxx.values.mean();
  return model;
}

Matrix residual_gram(const KernelModel& model) {
  const Matrix& kxx = model.kxx;
  const Matrix& kyy = model.kyy;
  if (kxx.rows() != kyy.rows() || model.v.rows() != kxx.rows())
    fail(ErrorCode::InvalidArgument, "model matrices have inconsistent sizes");
  // With H = V K_xx the four terms are K_yy - K_yy H - Hᵀ K_yy + Hᵀ K_yy H.
  const Matrix h = model.v * kxx;
  const Matrix kyy_h = kyy * h;
  Matrix out = kyy - kyy_h - kyy_h.transpose() + h.transpose() * kyy_h;
  out = 0.5 * (out + out.transpose());
  return out;
}

double holdout_error(const KernelModel& model, const HoldoutBlocks& blocks) {
  check_blocks(blocks, model.kxx.rows());
  const Matrix p = blocks.kx_new * model.v;
  return holdout_from_projection(p, model.kyy, blocks);
}

double holdout_error_direct(const Matrix& kxx_centered, const Matrix& kyy_centered, double tau,
                            const HoldoutBlocks& blocks) {
  check_tau(tau);
  check_blocks(blocks, kxx_centered.rows());
  Matrix a = kxx_centered;
  a.diagonal().array() += tau;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::NumericalError, "Cholesky factorization of tau I + K_xx failed");
  const Matrix p = llt.solve(blocks.kx_new.transpose()).transpose();
  return holdout_from_projection(p, kyy_centered, blocks);
}

double target_variance(const HoldoutBlocks& blocks) { return blocks.ky_newnew.diagonal().mean(); }

double explained_variance(double error, std::size_t m, double var_ynew) {
  if (m == 0) fail(ErrorCode::InvalidArgument, "explained variance needs at least one point");
  if (!(var_ynew > 0.0)) fail(ErrorCode::DegenerateTargets, "held-out targets have no variance");
  return 1.0 - error / (static_cast<double>(m) * var_ynew);
}

HoldoutBlocks holdout_blocks(std::span<const double> x_train, std::span<const double> y_train,
                             std::span<const double> x_new, std::span<const double> y_new,
                             double gamma) {
  if (x_train.size() != y_train.size() || x_new.size() != y_new.size())
    fail(ErrorCode::InvalidArgument, "paired samples must have equal lengths");
  const Matrix kxx = gram_matrix(x_train, gamma).values;
  const Matrix kyy = gram_matrix(y_train, gamma).values;
  const Matrix kx_new = cross_gram_matrix(x_new, x_train, gamma).values;
  const Matrix ky_new = cross_gram_matrix(y_new, y_train, gamma).values;
  const Matrix ky_nn = cross_gram_matrix(y_new, y_new, gamma).values;
  return {center_cross_gram(kx_new, kxx), center_cross_gram(ky_new, kyy),
          center_new_gram(ky_nn, ky_new, kyy)};
}

Vector preimage_weights(const KernelModel& model, double x_new) {
  if (!model.has_samples())
    fail(ErrorCode::InvalidArgument, "pre-images need a model fitted from samples");
  const auto n = model.x_train.size();
  Vector k(n);
  for (Eigen::Index i = 0; i < n; ++i) k(i) = se_kernel(model.x_train(i), x_new, model.gamma);
  // Center the new kernel row with the training averages.
  const Vector k_centered = (k - model.kxx_col_means).array() - k.mean() + model.kxx_grand_mean;
  const Vector beta = model.v * k_centered;
  // φ(y) prediction = mean φ(y) + Φ̃_y β, and Φ̃_y β = Φ_y (β - mean(β)).
  return (beta.array() - beta.mean() + 1.0 / static_cast<double>(n)).matrix();
}

double preimage_objective(const KernelModel& model, const Vector& alpha, double u) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i)
    s += alpha(i) * se_kernel(model.y_train(i), u, model.gamma);
  return -2.0 * s + 1.0;
}

namespace {

double objective_gradient(const KernelModel& model, const Vector& alpha, double u) {
  double g = 0.0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const double d = model.y_train(i) - u;
    g += alpha(i) * d * se_kernel(model.y_train(i), u, model.gamma);
  }
  return -4.0 * model.gamma * g;
}

PreimageResult descend(const KernelModel& model, const Vector& alpha, double start,
                       const PreimageOptions& opt) {
  PreimageResult r;
  double u = start;
  double f = preimage_objective(model, alpha, u);
  double step = 1.0;
  for (r.iterations = 0; r.iterations < opt.max_iterations; ++r.iterations) {
    const double g = objective_gradient(model, alpha, u);
    if (std::abs(g) < opt.gradient_tolerance) {
      r.converged = true;
      break;
    }
    // Armijo backtracking.
    bool accepted = false;
    while (step > 1e-300) {
      const double candidate = u - step * g;
      const double fc = preimage_objective(model, alpha, candidate);
      if (fc <= f - 1e-4 * step * g * g) {
        u = candidate;
        f = fc;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    step *= 2.0;
  }
  if (!r.converged && std::abs(objective_gradient(model, alpha, u)) < opt.gradient_tolerance)
    r.converged = true;
  r.value = u;
  r.objective = f;
  return r;
}

}  // namespace

PreimageResult preimage(const KernelModel& model, double x_new, const PreimageOptions& options) {
  const Vector alpha = preimage_weights(model, x_new);
  const auto n = static_cast<std::size_t>(model.y_train.size());

  std::vector<double> start_obj(n);
  for (std::size_t j = 0; j < n; ++j)
    start_obj[j] = preimage_objective(model, alpha, model.y_train(static_cast<Eigen::Index>(j)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t starts = std::min(options.starts, n);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                    [&](std::size_t a, std::size_t b) { return start_obj[a] < start_obj[b]; });

  PreimageResult best;
  bool have = false;
  for (std::size_t s = 0; s < starts; ++s) {
    const double u0 = model.y_train(static_cast<Eigen::Index>(order[s]));
    PreimageResult r = descend(model, alpha, u0, options);
    if (!have || r.objective < best.objective) {
      best = r;
      have = true;
    }
  }
  return best;
}

}  // namespace grcausal
