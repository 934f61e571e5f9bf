#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

#include "grcausal/kernel_core.hpp"

namespace grcausal {

/// Coefficient matrix of a linear model between two whitened, equally
/// distributed vector variables. All singular values must lie in [0, 1).
struct MixingMatrix {
  Matrix a;
  bool symmetric = false;
  Vector singular_values;  // nonincreasing

  static MixingMatrix from(const Matrix& a);
};

inline constexpr std::size_t kDefaultKroneckerCap = 4096;

/// Scalar shrinkage of the n-th cumulant when regressing against the causal
/// direction: (1 - w²)^n / (1 - w^n) + (-w)^n. Requires |w| < 1.
double cumulant_factor(double w, int n);

/// n-fold Kronecker power of a square matrix.
Matrix kronecker_power(const Matrix& a, int n, std::size_t cap = kDefaultKroneckerCap);

/// Matrix relating order-n cumulant tensors of the anti-causal and causal
/// residuals: (I - AᵀA)^⊗n (I - A^⊗n)^-1 + (-1)^n (Aᵀ)^⊗n.
struct CumulantRelation {
  int n = 0;
  Matrix m;
  double op_norm = 0.0;
};

CumulantRelation build_mn(const MixingMatrix& a, int n, std::size_t cap = kDefaultKroneckerCap);

/// Operator norm of M_n for symmetric A from its eigenvalues alone: the
/// maximum over index tuples v of
/// |Π(1 - λ_vj²) / (1 - Π λ_vi) + (-1)^n Π λ_vj|.
double symmetric_op_norm(std::span<const double> eigenvalues, int n, std::size_t cap = kDefaultKroneckerCap);

/// (det(I - AAᵀ), det(I - AᵀA)).
std::pair<double, double> determinant_identity_check(const MixingMatrix& a);

/// ‖I - AᵀA‖_F / ‖I - AAᵀ‖_F.
double second_cumulant_ratio(const MixingMatrix& a);

/// ∫ He_2(x)² φ(x)² dx and ∫ He_3(x)² φ(x)² dx by adaptive quadrature, cached.
double hermite_moment_h2();
double hermite_moment_h3();

/// Truncated Gram-Charlier approximation of the squared energy distance to
/// N(0, 1): κ3²/36 E[He_2² φ] + κ4²/576 E[He_3² φ].
double gram_charlier_energy(double kappa3, double kappa4);

struct ProjectionCheck {
  double c = 0.0;              // (p1^⊗n)ᵀ M_n p1^⊗n
  double residual = 0.0;       // ‖M_n p - c p‖
  bool degenerate_top = false; // top eigenvalue of I - AAᵀ not simple
};

/// Eigenvalue of M_n attached to the Kronecker power of the leading
/// eigenvector of C = I - AAᵀ. Requires symmetric A.
ProjectionCheck projected_shrinkage_check(const MixingMatrix& a, int n, std::size_t cap = kDefaultKroneckerCap);

/// U diag(σ) Vᵀ with U, V Haar-random orthogonal matrices.
Matrix random_mixing_matrix(std::span<const double> singular_values, std::uint64_t seed);

/// R diag(λ) Rᵀ with R Haar-random orthogonal.
Matrix random_symmetric_matrix(std::span<const double> eigenvalues, std::uint64_t seed);

}  // namespace grcausal
