#pragma once

#include <vector>

#include "specfun/linalg.hpp"
#include "specfun/system.hpp"

namespace specfun {

// τ⊖ = 𝐇 ⊖ Jτ
Subspace j_companion(const SymmetricSystem& sys, const Subspace& tau);

// (Jh, k) = 0 for all h, k in eta.
bool is_neutral(const SymmetricSystem& sys, const Subspace& eta, double tol = 1e-10);

// Unitary X with X* Ĵ X = J, where Ĵ = i·diag(I_H, I_Ĥ, -I_H).  Neutral
// subspaces are mapped by X onto graphs of isometries from H ⊕ Ĥ into H.
Matrix build_X(const Dimensions& dims);
Matrix build_J_hat(const Dimensions& dims);

// Subspace τ with τ⊖ neutral, dim τ = ν + ν̂ and τ⊖ ∩ η = {0}, built by
// extending -V_η (the isometry whose graph is Xη) to an isometry onto H.
Subspace complete_tau(const SymmetricSystem& sys, const Subspace& eta, double tol = 1e-10);

// Coordinates of 𝐇 = H ⊕ Ĥ ⊕ H are split further by H = H₁⊥ ⊕ H₁, with H₁⊥
// spanned by the first dim(τ⊖) coordinates of H.  The index lists below give
// the positions of each block inside a vector of 𝐇.
struct BlockIndex {
  std::vector<int> a0_h1perp;  // Γ⁰₀ₐ¹: first H slot, H₁⊥ part
  std::vector<int> a0_h1;      // Γ⁰₀ₐ²: first H slot, H₁ part
  std::vector<int> hat;        // Γ̂ₐ: Ĥ slot
  std::vector<int> a1_h1;      // Γ¹₁ₐ²: last H slot, H₁ part
  std::vector<int> a1_h1perp;  // Γ¹₁ₐ¹: last H slot, H₁⊥ part
  std::vector<int> b0;         // first H slot at b
  std::vector<int> b1;         // last H slot at b
  std::vector<int> h0;         // 𝐇₀ = H₁⊥ ⊕ H₁ ⊕ Ĥ ⊕ H₁ in this order
};

struct GeometryOptions {
  double tol = 1e-10;
  bool check_tau_definite = true;
  cplx probe_lambda{0.0, 1.0};
};

struct BoundaryGeometry {
  SymmetricSystem sys;
  Subspace tau;
  Subspace tau_companion;
  Matrix U_tilde;      // Ũ: J-unitary, Ũ𝐇₀ = τ
  Matrix U_tilde_inv;  // Ũ⁻¹ (= Ũ*, as Ũ is also unitary here)
  Matrix U;            // Ũ restricted to 𝐇₀, columns in h0 order
  int h1_dim = 0;      // dim H₁
  int h1perp_dim = 0;  // dim H₁⊥ = dim τ⊖
  BlockIndex index;

  int dim_h0() const { return static_cast<int>(index.h0.size()); }
  // ℋ̇₀ = ℋ̇₁ = H₁ ⊕ Ĥ ⊕ H in the regular case.
  int dim_dot() const { return h1_dim + sys.dims().nu_hat + sys.dims().nu; }
};

BoundaryGeometry build_geometry(const SymmetricSystem& sys, const Subspace& tau,
                                const GeometryOptions& opts = {});

// Trace selectors at b acting on y(b).
struct GammaB {
  Matrix G0b;   // first H component
  Matrix Ghat;  // Ĥ component
  Matrix G1b;   // last H component
};

GammaB build_gamma_b(const SymmetricSystem& sys);

// Boundary maps as matrices on the stacked boundary vector (Ũ⁻¹y(a), y(b)).
//   G0 rows: -Γ¹₁ₐ¹ | -Γ¹₁ₐ² | i(Γ̂ₐ - Γ̂_b) | Γ₀b
//   G1 rows:  Γ⁰₀ₐ¹ |  Γ⁰₀ₐ² | ½(Γ̂ₐ + Γ̂_b) | -Γ₁b
// G0_dot, G1_dot drop the leading H₁⊥ row block.
struct TripletMaps {
  Matrix G0;
  Matrix G1;
  Matrix G0_dot;
  Matrix G1_dot;
  GammaB gamma_b;
  int dim_h1perp = 0;
  int dim_h1 = 0;
  int dim_hat = 0;
  int dim_b = 0;
};

TripletMaps build_triplet(const BoundaryGeometry& geom);

// Stacked boundary vector for a solution with y(a) = c and y(b) = yb.
Matrix boundary_data(const BoundaryGeometry& geom, const Matrix& c, const Matrix& yb);

// |[y,z]_b − (Jy(a), z(a)) − ((G1 w_y, G0 w_z) − (G0 w_y, G1 w_z))| for
// stacked boundary vectors w_y, w_z.
double green_identity_residual(const BoundaryGeometry& geom, const TripletMaps& triplet,
                               const Vector& w_y, const Vector& w_z);

}  // namespace specfun
