#include "grcausal/asymmetry_lab.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "grcausal/error.hpp"

namespace grcausal {
namespace {

std::size_t checked_power(std::size_t d, int n, std::size_t cap) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "cumulant order must be at least 1");
  std::size_t size = 1;
  for (int i = 0; i < n; ++i) {
    size *= d;
    if (size > cap)
      fail(ErrorCode::ResourceLimit,
           "Kronecker power of order " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  }
  return size;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix haar_orthogonal(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix g(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i)
    if (r(i, i) < 0.0) q.col(i) *= -1.0;
  return q;
}

double hermite_moment(int order) {
  auto integrand = [order](double x) {
    const double he = order == 2 ? x * x - 1.0 : x * x * x - 3.0 * x;
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    return he * he * phi * phi;
  };
  using boost::math::quadrature::gauss_kronrod;
  const double inf = std::numeric_limits<double>::infinity();
  return gauss_kronrod<double, 61>::integrate(integrand, -inf, inf, 15, 1e-10);
}

}  // namespace

MixingMatrix MixingMatrix::from(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) fail(ErrorCode::InvalidArgument, "mixing matrix must be square");
  if (!a.allFinite()) fail(ErrorCode::InvalidArgument, "mixing matrix is not finite");
  MixingMatrix m;
  m.a = a;
  m.symmetric = (a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff());
  m.singular_values = Eigen::JacobiSVD<Matrix>(a).singularValues();
  if (m.singular_values(0) >= 1.0)
    fail(ErrorCode::DomainError, "mixing matrix singular values must be below 1");
  return m;
}

double cumulant_factor(double w, int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "cumulant order must be at least 1");
  if (!(std::abs(w) < 1.0)) fail(ErrorCode::DomainError, "cumulant factor requires |w| < 1");
  return std::pow(1.0 - w * w, n) / (1.0 - std::pow(w, n)) + std::pow(-w, n);
}

Matrix kronecker_power(const Matrix& a, int n, std::size_t cap) {
  checked_power(static_cast<std::size_t>(std::max(a.rows(), a.cols())), n, cap);
  Matrix out = a;
  for (int i = 1; i < n; ++i) out = kronecker(out, a);
  return out;
}

CumulantRelation build_mn(const MixingMatrix& mix, int n, std::size_t cap) {
  const Matrix& a = mix.a;
  const auto d = a.rows();
  const auto size = static_cast<Eigen::Index>(checked_power(static_cast<std::size_t>(d), n, cap));

  const Matrix c_tilde = Matrix::Identity(d, d) - a.transpose() * a;
  const Matrix a_pow = kronecker_power(a, n, cap);
  const Matrix lhs = Matrix::Identity(size, size) - a_pow;
  Eigen::PartialPivLU<Matrix> lu(lhs);
  if (!(lu.rcond() > 1e-14)) fail(ErrorCode::DomainError, "I - A^n is singular");

  CumulantRelation out;
  out.n = n;
  out.m = kronecker_power(c_tilde, n, cap) * lu.inverse();
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  out.m += sign * a_pow.transpose();  // (Aᵀ)^⊗n = (A^⊗n)ᵀ
  out.op_norm = Eigen::BDCSVD<Matrix>(out.m).singularValues()(0);
  return out;
}

double symmetric_op_norm(std::span<const double> eigenvalues, int n, std::size_t cap) {
  const std::size_t d = eigenvalues.size();
  if (d == 0) fail(ErrorCode::InvalidArgument, "need at least one eigenvalue");
  for (double l : eigenvalues)
    if (!(std::abs(l) < 1.0)) fail(ErrorCode::DomainError, "eigenvalues must satisfy |λ| < 1");
  const std::size_t tuples = checked_power(d, n, cap);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;

  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  double best = 0.0;
  for (std::size_t t = 0; t < tuples; ++t) {
    double shrink = 1.0;
    double prod = 1.0;
    for (std::size_t j : idx) {
      const double l = eigenvalues[j];
      shrink *= 1.0 - l * l;
      prod *= l;
    }
    if (prod == 1.0) fail(ErrorCode::DomainError, "eigenvalue product equals one");
    best = std::max(best, std::abs(shrink / (1.0 - prod) + sign * prod));
    // Odometer increment over {0..d-1}^n.
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (++idx[k] < d) break;
      idx[k] = 0;
    }
  }
  return best;
}

std::pair<double, double> determinant_identity_check(const MixingMatrix& mix) {
  const auto d = mix.a.rows();
  const Matrix id = Matrix::Identity(d, d);
  return {(id - mix.a * mix.a.transpose()).determinant(), (id - mix.a.transpose() * mix.a).determinant()};
}

double second_cumulant_ratio(const MixingMatrix& mix) {
  const auto d = mix.a.rows();
  const Matrix id = Matrix::Identity(d, d);
  return (id - mix.a.transpose() * mix.a).norm() / (id - mix.a * mix.a.transpose()).norm();
}

double hermite_moment_h2() {
  static const double value = hermite_moment(2);
  return value;
}

double hermite_moment_h3() {
  static const double value = hermite_moment(3);
  return value;
}

double gram_charlier_energy(double kappa3, double kappa4) {
  if (!std::isfinite(kappa3) || !std::isfinite(kappa4))
    fail(ErrorCode::InvalidArgument, "cumulants must be finite");
  return kappa3 * kappa3 / 36.0 * hermite_moment_h2() + kappa4 * kappa4 / 576.0 * hermite_moment_h3();
}

ProjectionCheck projected_shrinkage_check(const MixingMatrix& mix, int n, std::size_t cap) {
  if (!mix.symmetric) fail(ErrorCode::InvalidArgument, "projection check requires a symmetric matrix");
  const auto d = mix.a.rows();
  const Matrix c = Matrix::Identity(d, d) - mix.a * mix.a.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(c);
  if (es.info() != Eigen::Success) fail(ErrorCode::NumericalError, "eigendecomposition of C failed");

  ProjectionCheck out;
  const Vector& ev = es.eigenvalues();
  if (d > 1) out.degenerate_top = std::abs(ev(d - 1) - ev(d - 2)) <= 1e-12 * std::max(1.0, std::abs(ev(d - 1)));

  const Matrix p1 = es.eigenvectors().col(d - 1);
  const Matrix p = kronecker_power(p1, n, cap);  // d^n x 1
  const CumulantRelation rel = build_mn(mix, n, cap);
  const Vector mp = rel.m * p;
  out.c = p.col(0).dot(mp);
  out.residual = (mp - out.c * p.col(0)).norm();
  return out;
}

Matrix random_mixing_matrix(std::span<const double> singular_values, std::uint64_t seed) {
  const auto d = static_cast<Eigen::Index>(singular_values.size());
  if (d == 0) fail(ErrorCode::InvalidArgument, "need at least one singular value");
  std::mt19937_64 rng(seed);
  const Matrix u = haar_orthogonal(d, rng);
  const Matrix v = haar_orthogonal(d, rng);
  const Vector s = Eigen::Map<const Vector>(singular_values.data(), d);
  return u * s.asDiagonal() * v.transpose();
}

Matrix random_symmetric_matrix(std::span<const double> eigenvalues, std::uint64_t seed) {
  const auto d = static_cast<Eigen::Index>(eigenvalues.size());
  if (d == 0) fail(ErrorCode::InvalidArgument, "need at least one eigenvalue");
  std::mt19937_64 rng(seed);
  const Matrix r = haar_orthogonal(d, rng);
  const Vector l = Eigen::Map<const Vector>(eigenvalues.data(), d);
  Matrix a = r * l.asDiagonal() * r.transpose();
  return 0.5 * (a + a.transpose());
}

}  // namespace grcausal
