#pragma once

#include "specfun/boundary.hpp"
#include "specfun/propagate.hpp"

namespace specfun {

struct SolveOptions {
  PropagatorOptions propagation;
  double min_imag = 1e-8;       // |Im λ| below this is rejected
  double warn_condition = 1e10;
};

// Solutions ξ₁, ξ₂, ξ₃ and u₊ (Im λ > 0) or u₋ (Im λ < 0), stored by their
// initial data y(a) = c.  Together they form Z with Γ′₀ Z = I.
struct FundamentalSolutions {
  cplx lambda;
  Matrix initial;   // n x n: columns ξ₁ | ξ₂ | ξ₃ | u
  Matrix boundary;  // 2n x n: stacked (Ũ⁻¹y(a), y(b)) of each column
  int dim_h1perp = 0;
  int dim_h1 = 0;
  int dim_hat = 0;
  int dim_b = 0;
  double condition = 0.0;
  bool ill_conditioned = false;

  Matrix xi1() const { return initial.leftCols(dim_h1perp); }
  Matrix xi2() const { return initial.middleCols(dim_h1perp, dim_h1); }
  Matrix xi3() const { return initial.middleCols(dim_h1perp + dim_h1, dim_hat); }
  Matrix u() const { return initial.rightCols(dim_b); }
};

FundamentalSolutions solve_fundamental(const BoundaryGeometry& geom, const TripletMaps& triplet,
                                       cplx lambda, const SolveOptions& opts = {});

// Weyl function M₊(λ) in the 4x4 block form over H₁⊥ ⊕ H₁ ⊕ Ĥ ⊕ H together
// with the derived functions m₀, S₁, S₂, Ṁ₊ and J₀.
struct WeylData {
  cplx lambda;
  Matrix M_plus;
  Matrix m0;     // 𝐇₀ → 𝐇₀
  Matrix S1;     // ℋ̇₀ → 𝐇₀
  Matrix S2;     // 𝐇₀ → ℋ̇₁
  Matrix M_dot;  // ℋ̇₀ → ℋ̇₁
  Matrix J0;     // compression of J to 𝐇₀
  FundamentalSolutions solutions;
};

WeylData weyl_function(const BoundaryGeometry& geom, const TripletMaps& triplet, cplx lambda,
                       const SolveOptions& opts = {});

// Block (row, col) of M₊ with blocks ordered H₁⊥, H₁, Ĥ, H (0-based).
Matrix weyl_block(const WeylData& w, int row, int col);

// Largest deviation in the identities relating M₊(λ̄)* to boundary values of
// ξ₁, ξ₂, ξ₃, u₋ at λ in the lower half-plane.
double conjugate_identity_defect(const BoundaryGeometry& geom, const TripletMaps& triplet,
                                 cplx lambda_minus, const SolveOptions& opts = {});

}  // namespace specfun
