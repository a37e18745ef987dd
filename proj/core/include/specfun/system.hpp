#pragma once

#include <memory>
#include <vector>

#include "specfun/linalg.hpp"
#include "specfun/types.hpp"

namespace specfun {

struct Dimensions {
  int nu = 1;      // dim H
  int nu_hat = 0;  // dim Ĥ

  int n() const { return 2 * nu + nu_hat; }
};

void check_dimensions(const Dimensions& dims);

// Signature matrix with blocks (1,3) = -I_nu, (2,2) = i I_nu_hat, (3,1) = I_nu.
Matrix build_signature(const Dimensions& dims);

enum class CoefficientKind { Constant, Polynomial, PiecewiseConstant, Tabulated };

const char* coefficient_kind_name(CoefficientKind kind);

// Matrix-valued coefficient t -> C(t) in one of four representable forms.
// Copies share the underlying data.
class CoefficientField {
 public:
  static CoefficientField constant(Matrix value);
  // C(t) = sum_k coefficients[k] * t^k
  static CoefficientField polynomial(std::vector<Matrix> coefficients);
  // values[i] holds on [breakpoints[i], breakpoints[i+1]); the last piece is
  // closed on the right.  Outside the breakpoint range the end values extend.
  static CoefficientField piecewise_constant(std::vector<double> breakpoints,
                                             std::vector<Matrix> values);
  // Linear interpolation between (nodes[i], values[i]); constant extension
  // outside the node range.
  static CoefficientField tabulated(std::vector<double> nodes, std::vector<Matrix> values);

  CoefficientField();

  Matrix operator()(double t) const;
  CoefficientKind kind() const;
  Eigen::Index dim() const;
  bool is_constant() const;
  bool is_piecewise_constant() const;  // true for constant fields too
  bool is_zero() const;
  // Points where the field is not smooth (piece boundaries, table nodes).
  std::vector<double> breakpoints() const;
  // Upper bound of the spectral norm over [a, b], from the stored data.
  double norm_bound(double a, double b) const;

  const std::vector<double>& knots() const;
  const std::vector<Matrix>& data() const;

 private:
  struct Data;
  explicit CoefficientField(std::shared_ptr<const Data> data);
  std::shared_ptr<const Data> data_;
};

// J y' - B(t) y = λ Δ(t) y on the finite interval [a, b].
class SymmetricSystem {
 public:
  SymmetricSystem(Dimensions dims, double a, double b, CoefficientField B, CoefficientField Delta);

  const Dimensions& dims() const { return dims_; }
  int n() const { return dims_.n(); }
  double a() const { return a_; }
  double b() const { return b_; }
  const CoefficientField& B() const { return B_; }
  const CoefficientField& Delta() const { return Delta_; }
  const Matrix& J() const { return J_; }
  bool regular() const { return true; }

  // -J (B(t) + λ Δ(t)), the generator of y' = A(t) y.
  Matrix generator(double t, cplx lambda) const;
  bool constant_coefficients() const;
  bool piecewise_constant_coefficients() const;
  std::vector<double> breakpoints() const;

 private:
  Dimensions dims_;
  double a_;
  double b_;
  CoefficientField B_;
  CoefficientField Delta_;
  Matrix J_;
};

struct ValidationIssue {
  ErrorCode code;
  double t;
  double magnitude;  // Hermitian defect of B, or the negative eigenvalue of Δ
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
};

std::vector<double> default_sample_grid(const SymmetricSystem& sys, int uniform_points = 65);

ValidationReport validate_system(const SymmetricSystem& sys, const std::vector<double>& samples,
                                 double tol = 1e-12);

struct NullManifoldReport {
  int dim_N = 0;
  Matrix basis_initial_data;  // n x dim_N, orthonormal columns
  bool definite = true;
};

// Kernel of the Gram matrix ∫ Y*(t,λ) Δ(t) Y(t,λ) dt.
NullManifoldReport probe_null_manifold(const SymmetricSystem& sys, cplx probe_lambda,
                                       double tol = 1e-9);

bool tau_definite(const SymmetricSystem& sys, const Subspace& tau, cplx probe_lambda,
                  double tol = 1e-9);

}  // namespace specfun
