#pragma once

#include "specfun/boundary.hpp"
#include "specfun/system.hpp"

namespace specfun::bench {

// B ≡ 0, Δ ≡ I on [0, 1].
inline SymmetricSystem free_system(int nu, int nu_hat) {
  const Dimensions dims{nu, nu_hat};
  const Eigen::Index n = dims.n();
  return SymmetricSystem(dims, 0.0, 1.0, CoefficientField::constant(Matrix::Zero(n, n)),
                         CoefficientField::constant(Matrix::Identity(n, n)));
}

// Δ(t) = (1 + t) I, forcing the adaptive integrator.
inline SymmetricSystem growing_weight(int nu) {
  const Dimensions dims{nu, 0};
  const Eigen::Index n = dims.n();
  return SymmetricSystem(dims, 0.0, 1.0, CoefficientField::constant(Matrix::Zero(n, n)),
                         CoefficientField::polynomial({Matrix::Identity(n, n), Matrix::Identity(n, n)}));
}

inline Subspace leading_span(Eigen::Index n, Eigen::Index k) {
  return Subspace(Matrix::Identity(n, n).leftCols(k));
}

}  // namespace specfun::bench
