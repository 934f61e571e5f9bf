#include "grcausal/residual_whitening.hpp"

#include <cmath>

#include "grcausal/error.hpp"

namespace grcausal {

WhitenedResiduals whiten(const Matrix& k_eps_centered, const WhiteningOptions& options) {
  if (k_eps_centered.rows() != k_eps_centered.cols() || k_eps_centered.rows() < 2)
    fail(ErrorCode::InvalidArgument, "residual Gram must be square with order >= 2");
  if (!k_eps_centered.allFinite()) fail(ErrorCode::NumericalError, "residual Gram is not finite");

  Eigen::SelfAdjointEigenSolver<Matrix> es(k_eps_centered);
  if (es.info() != Eigen::Success)
    fail(ErrorCode::NumericalError, "eigendecomposition of the residual Gram failed");

  const auto n = k_eps_centered.rows();
  WhitenedResiduals out;
  out.eigenvalues = es.eigenvalues().reverse().cwiseMax(0.0);

  const double top = out.eigenvalues(0);
  if (!(top > options.absolute_cutoff))
    fail(ErrorCode::DegenerateResiduals, "residual Gram has no usable spectrum (exact fit)");

  Eigen::Index r = 0;
  while (r < n && out.eigenvalues(r) > options.relative_cutoff * top &&
         out.eigenvalues(r) > options.absolute_cutoff)
    ++r;
  out.retained = static_cast<std::size_t>(r);

  // Eigen returns ascending order; the top r components are the last r columns.
  out.z = std::sqrt(static_cast<double>(n)) * es.eigenvectors().rightCols(r).rowwise().reverse();

  Vector first = out.z.col(0);
  const double third = (first.array() - first.mean()).cube().mean();
  if (third < 0.0) {
    out.z.col(0) *= -1.0;
    first *= -1.0;
  }
  out.first = std::move(first);
  return out;
}

Vector variance_profile(const WhitenedResiduals& w) {
  const Vector head = w.eigenvalues.head(static_cast<Eigen::Index>(w.retained));
  const double total = w.eigenvalues.sum();
  return head / total;
}

}  // namespace grcausal
