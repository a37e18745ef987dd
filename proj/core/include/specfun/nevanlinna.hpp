#pragma once

#include <functional>
#include <vector>

#include "specfun/weyl.hpp"

namespace specfun {

// Boundary parameter τ = {C₀(λ), C₁(λ)} with C₀, C₁ acting on ℋ̇ = H₁ ⊕ Ĥ ⊕ H.
class BoundaryParameter {
 public:
  using Function = std::function<Matrix(cplx)>;

  static BoundaryParameter constant(Matrix C0, Matrix C1);
  static BoundaryParameter callable(Function C0, Function C1, Eigen::Index dim);
  static BoundaryParameter identity_zero(Eigen::Index dim);  // {I, 0}
  static BoundaryParameter zero_identity(Eigen::Index dim);  // {0, I}

  BoundaryParameter() = default;

  bool is_constant() const { return constant_; }
  Eigen::Index dim() const { return dim_; }
  Matrix C0(cplx lambda) const;
  Matrix C1(cplx lambda) const;
  // {X C₀, X C₁}, an equivalent representative for invertible X.
  BoundaryParameter transformed(const Matrix& X) const;

 private:
  Function c0_;
  Function c1_;
  Eigen::Index dim_ = 0;
  bool constant_ = false;
};

struct ClassViolation {
  cplx lambda;
  enum class Kind { NotNonnegative, NotInvertible } kind;
  double value;  // smallest eigenvalue, or smallest singular value
};

struct ClassReport {
  bool valid = true;
  std::vector<ClassViolation> violations;
};

// Nevanlinna pair check at each sample: 2 Im(C₁C₀*) ⪰ -tol and C₀ - iC₁ invertible.
ClassReport validate_pair(const BoundaryParameter& param, const std::vector<cplx>& lambda_samples,
                          double tol = 1e-10);

// Constant pair with Im(C₁C₀*) = 0 and C₀ ± iC₁ invertible.
bool is_selfadjoint_parameter(const BoundaryParameter& param, double tol = 1e-10);

struct MFunctionSample {
  cplx lambda;
  Matrix value;
};

// m_τ = m₀ + S₁ (C₀ - C₁Ṁ₊)⁻¹ C₁ S₂
MFunctionSample m_tau(const WeylData& weyl, const BoundaryParameter& param);
MFunctionSample m_tau(const BoundaryGeometry& geom, const TripletMaps& triplet,
                      const BoundaryParameter& param, cplx lambda, const SolveOptions& opts = {});

// Solution v_τ of the boundary value problem Γ¹₁ₐ¹v = -P_{H₁⊥},
// C₀Γ̇′₀v - C₁Γ̇′₁v = Φ, solved as one dense linear system.
struct VTauSolution {
  cplx lambda;
  Matrix initial;   // v_τ(a): n x dim 𝐇₀
  Matrix boundary;  // stacked boundary data (2n x dim 𝐇₀)
  MFunctionSample m;
  double residual = 0.0;  // max-norm residual of the imposed conditions
};

VTauSolution v_tau_bvp(const BoundaryGeometry& geom, const TripletMaps& triplet,
                       const BoundaryParameter& param, cplx lambda, const SolveOptions& opts = {});

// Rows of the conditions Γ¹₁ₐ¹ y and C₀Γ̇′₀y − C₁Γ̇′₁y acting on the stacked
// boundary vector (Ũ⁻¹y(a), y(b)).
Matrix boundary_conditions(const BoundaryGeometry& geom, const TripletMaps& triplet,
                           const Matrix& C0, const Matrix& C1);

// Φ(λ) = (0, C₀ₐ, Ĉ₀ + (i/2)Ĉ₁, -C₁ₐ) : H₁⊥ ⊕ H₁ ⊕ Ĥ ⊕ H₁ → ℋ̇₀
Matrix phi_matrix(const TripletMaps& triplet, const Matrix& C0, const Matrix& C1);

struct AdmissibilityOptions {
  double top_threshold = 1e-3;
  double slope_threshold = -0.5;
  double zero_floor = 1e-14;
};

struct DecayFit {
  std::vector<double> norms;
  double slope = 0.0;
  bool identically_zero = false;
  bool tends_to_zero = false;
};

struct AdmissibilityReport {
  std::vector<double> y;
  DecayFit first;   // (1/iy)(C₀ - C₁Ṁ₊)⁻¹C₁
  DecayFit second;  // (1/iy)Ṁ₊(C₀ - C₁Ṁ₊)⁻¹C₀
  std::vector<double> singular_at;
  bool admissible = false;
};

std::vector<double> default_y_grid();

AdmissibilityReport check_admissible(const BoundaryGeometry& geom, const TripletMaps& triplet,
                                     const BoundaryParameter& param,
                                     const std::vector<double>& y_grid = default_y_grid(),
                                     const AdmissibilityOptions& opts = {},
                                     const SolveOptions& solve = {});

struct UniversalAdmissibilityReport {
  std::vector<double> y;
  DecayFit limit;                          // ‖Ṁ₊(iy)‖
  std::vector<Vector> directions;          // unit vectors h
  std::vector<std::vector<double>> growth; // y·Im(Ṁ₊(iy)h, h) per direction
  std::vector<double> growth_slopes;
  bool diverges = false;
  bool universal = false;
};

UniversalAdmissibilityReport universal_admissibility(
    const BoundaryGeometry& geom, const TripletMaps& triplet,
    const std::vector<double>& y_grid = default_y_grid(), const AdmissibilityOptions& opts = {},
    const SolveOptions& solve = {});

// -min over samples of the smallest eigenvalue of Im m(λ).
double herglotz_defect(const std::vector<MFunctionSample>& samples);

// Smallest eigenvalue of Im m_τ(λ) - Im(λ) ∫ v_τ* Δ v_τ.
double inequality_defect(const BoundaryGeometry& geom, const TripletMaps& triplet,
                         const BoundaryParameter& param, cplx lambda, const SolveOptions& opts = {});

}  // namespace specfun
