#pragma once

#include <cstddef>

#include "grcausal/kernel_core.hpp"

namespace grcausal {

/// Kernel-PCA view of the centered residual Gram matrix.
struct WhitenedResiduals {
  Vector eigenvalues;  // all eigenvalues of the centered Gram, nonincreasing
  Matrix z;            // N x r whitened coordinates, (1/N) ZᵀZ = I
  Vector first;        // first column of z, oriented to nonnegative skewness
  std::size_t retained = 0;
};

struct WhiteningOptions {
  double relative_cutoff = 1e-10;
  double absolute_cutoff = 1e-12;
};

/// Eigendecomposes a centered residual Gram and returns Z = sqrt(N) B̃
/// restricted to components above the cutoffs. Throws DegenerateResiduals
/// when nothing survives.
WhitenedResiduals whiten(const Matrix& k_eps_centered, const WhiteningOptions& options = {});

/// Share of the retained spectrum carried by each component.
Vector variance_profile(const WhitenedResiduals& w);

}  // namespace grcausal
