#pragma once

#include "specfun/types.hpp"

namespace specfun {

// Subspace of C^n stored as an orthonormal frame (n x k, frame* frame = I_k).
class Subspace {
 public:
  Subspace() = default;
  // Orthonormalizes the spanning columns; columns that are numerically
  // dependent (relative singular value below rank_tol) are dropped.
  explicit Subspace(const Matrix& spanning, double rank_tol = 1e-12);
  static Subspace zero(Eigen::Index ambient);
  static Subspace full(Eigen::Index ambient);
  static Subspace from_orthonormal(Matrix frame);

  const Matrix& frame() const { return frame_; }
  Eigen::Index dim() const { return frame_.cols(); }
  Eigen::Index ambient() const { return frame_.rows(); }
  Matrix projector() const { return frame_ * frame_.adjoint(); }

 private:
  Matrix frame_;
};

namespace linalg {

// Orthonormal basis of range(m) via SVD, rank decided relative to the largest
// singular value.
Matrix orthonormal_range(const Matrix& m, double rank_tol = 1e-12);

// Orthonormal basis of the orthogonal complement of range(q) in C^rows, where
// q already has orthonormal columns.  Uses a full Householder QR so the result
// is deterministic for a given input.
Matrix orthogonal_complement(const Matrix& q);

// Orthonormal basis of ker(m); singular values below tol * max(1, sigma_max)
// count as zero.
Matrix null_space(const Matrix& m, double tol);

Eigen::Index numerical_rank(const Matrix& m, double tol);

// sin of the largest principal angle between two subspaces of equal dimension;
// returns 1 when the dimensions differ.
double max_principal_angle_sine(const Subspace& a, const Subspace& b);

// dim(a ∩ b) from the rank of the concatenated frames.
Eigen::Index intersection_dim(const Subspace& a, const Subspace& b, double tol = 1e-10);

// (m - m*) / 2i, the Hermitian imaginary part.
Matrix imag_part(const Matrix& m);
Matrix hermitian_part(const Matrix& m);

double min_eigenvalue(const Matrix& hermitian);
double max_eigenvalue(const Matrix& hermitian);

Matrix expm(const Matrix& a);

double spectral_norm(const Matrix& m);

}  // namespace linalg
}  // namespace specfun
