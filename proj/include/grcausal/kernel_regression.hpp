#pragma once

#include <cstddef>
#include <span>

#include "grcausal/kernel_core.hpp"

namespace grcausal {

/// Eigendecomposition of a centered training Gram matrix. Lets the ridge
/// inverse (tau I + K)^-1 be formed for any tau without refactoring.
class SpectralFactor {
 public:
  explicit SpectralFactor(const Matrix& k_centered);

  /// Q diag(1 / (tau + lambda_i)) Qᵀ. Eigenvalues are clamped at zero.
  Matrix ridge_inverse(double tau) const;

  const Vector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }

 private:
  Vector eigenvalues_;
  Matrix eigenvectors_;
};

/// Ridge regression between centered feature maps, held entirely as Gram
/// matrices. `v` is (tau I + K_xx)^-1.
struct KernelModel {
  Matrix v;
  double tau = 0.0;
  double gamma = 0.0;
  Matrix kxx;  // centered
  Matrix kyy;  // centered

  // Present only for models built from raw samples (fit_samples); needed to
  // center new kernel rows and to search for pre-images.
  Vector x_train;
  Vector y_train;
  Vector kxx_col_means;
  double kxx_grand_mean = 0.0;

  bool has_samples() const { return x_train.size() > 0; }
};

/// Centered blocks describing M held-out points against the training set.
struct HoldoutBlocks {
  Matrix kx_new;     // M x N, centered with training averages
  Matrix ky_new;     // M x N, centered with training averages
  Matrix ky_newnew;  // M x M, centered with training averages
};

KernelModel fit(const GramMatrix& kxx_centered, const GramMatrix& kyy_centered, double tau);

/// Same as fit() but reuses an existing factorization of kxx_centered.
KernelModel fit(const SpectralFactor& factor, const GramMatrix& kxx_centered,
                const GramMatrix& kyy_centered, double tau);

/// Builds and centers both Gram matrices with bandwidth `gamma`, then fits.
KernelModel fit_samples(std::span<const double> x, std::span<const double> y, double gamma,
                        double tau, std::size_t max_order = kDefaultMaxGramOrder);

/// Gram matrix of the in-sample feature-space residuals:
/// K_yy - K_yy V K_xx - K_xx V K_yy + K_xx V K_yy V K_xx.
Matrix residual_gram(const KernelModel& model);

/// Sum of squared feature-space prediction errors on held-out points.
double holdout_error(const KernelModel& model, const HoldoutBlocks& blocks);

/// holdout_error() computed with a Cholesky solve against tau I + K_xx
/// instead of an explicit inverse. Used by the cross-validation grid.
double holdout_error_direct(const Matrix& kxx_centered, const Matrix& kyy_centered, double tau,
                            const HoldoutBlocks& blocks);

/// Average diagonal of the centered new-vs-new target block.
double target_variance(const HoldoutBlocks& blocks);

/// 1 - error / (M var_ynew).
double explained_variance(double error, std::size_t m, double var_ynew);

/// Builds the centered held-out blocks from raw samples.
HoldoutBlocks holdout_blocks(std::span<const double> x_train, std::span<const double> y_train,
                             std::span<const double> x_new, std::span<const double> y_new,
                             double gamma);

struct PreimageOptions {
  std::size_t starts = 5;
  std::size_t max_iterations = 500;
  double gradient_tolerance = 1e-8;
};

struct PreimageResult {
  double value = 0.0;
  double objective = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Expansion weights of the predicted target feature vector over φ(y_i),
/// including the training mean removed by centering.
Vector preimage_weights(const KernelModel& model, double x_new);

/// -2 αᵀ k(y, u) + k(u, u).
double preimage_objective(const KernelModel& model, const Vector& alpha, double u);

/// Approximate pre-image of the prediction at `x_new` by multi-start gradient
/// descent with backtracking. Requires a model built by fit_samples().
PreimageResult preimage(const KernelModel& model, double x_new, const PreimageOptions& options = {});

}  // namespace grcausal
