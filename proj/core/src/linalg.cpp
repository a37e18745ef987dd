#include "specfun/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace specfun {

Subspace::Subspace(const Matrix& spanning, double rank_tol)
    : frame_(linalg::orthonormal_range(spanning, rank_tol)) {}

Subspace Subspace::zero(Eigen::Index ambient) {
  Subspace s;
  s.frame_ = Matrix::Zero(ambient, 0);
  return s;
}

Subspace Subspace::full(Eigen::Index ambient) {
  Subspace s;
  s.frame_ = Matrix::Identity(ambient, ambient);
  return s;
}

Subspace Subspace::from_orthonormal(Matrix frame) {
  Subspace s;
  s.frame_ = std::move(frame);
  return s;
}

namespace linalg {

Matrix orthonormal_range(const Matrix& m, double rank_tol) {
  if (m.cols() == 0 || m.rows() == 0) return Matrix::Zero(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return Matrix::Zero(m.rows(), 0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rank_tol * sv(0)) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

Matrix orthogonal_complement(const Matrix& q) {
  const Eigen::Index n = q.rows();
  const Eigen::Index k = q.cols();
  if (k == 0) return Matrix::Identity(n, n);
  Eigen::HouseholderQR<Matrix> qr(q);
  Matrix full = qr.householderQ() * Matrix::Identity(n, n);
  return full.rightCols(n - k);
}

Matrix null_space(const Matrix& m, double tol) {
  const Eigen::Index cols = m.cols();
  if (cols == 0) return Matrix::Zero(0, 0);
  if (m.rows() == 0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * scale) ++rank;
  }
  return svd.matrixV().rightCols(cols - rank);
}

Eigen::Index numerical_rank(const Matrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv(0));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * scale) ++rank;
  }
  return rank;
}

double max_principal_angle_sine(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim() || a.ambient() != b.ambient()) return 1.0;
  if (a.dim() == 0) return 0.0;
  Matrix residual = a.frame() - b.frame() * (b.frame().adjoint() * a.frame());
  return std::min(1.0, spectral_norm(residual));
}

Eigen::Index intersection_dim(const Subspace& a, const Subspace& b, double tol) {
  if (a.dim() == 0 || b.dim() == 0) return 0;
  Matrix stacked(a.ambient(), a.dim() + b.dim());
  stacked << a.frame(), b.frame();
  return a.dim() + b.dim() - numerical_rank(stacked, tol);
}

Matrix imag_part(const Matrix& m) { return (m - m.adjoint()) / (2.0 * I_unit); }

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

double min_eigenvalue(const Matrix& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const Matrix& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

Matrix expm(const Matrix& a) { return a.exp(); }

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace linalg
}  // namespace specfun
