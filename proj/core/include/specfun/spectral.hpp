#pragma once

#include <functional>
#include <string>
#include <vector>

#include "specfun/nevanlinna.hpp"

namespace specfun {

using MSampler = std::function<Matrix(cplx)>;

struct Jump {
  double location;
  Matrix size;
};

// Nondecreasing, left-continuous σ with σ(0) = 0.
struct DistributionFunction {
  std::vector<double> grid;
  std::vector<Matrix> values;      // σ(s) at grid points
  std::vector<Matrix> continuous;  // part of σ(s) without jumps, same anchoring
  std::vector<Jump> jumps;
  std::vector<std::size_t> diverged_cells;  // i for cell [grid[i], grid[i+1]]

  Eigen::Index dim() const { return values.empty() ? 0 : values.front().rows(); }
};

struct StieltjesOptions {
  std::vector<double> epsilons{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  double scan_epsilon = 1e-2;   // nearest schedule entry is used for the pole scan
  double scan_step = 0.25;      // scan spacing as a fraction of scan_epsilon
  double scan_pad = 0.5;        // poles are searched this far outside the window
  double min_jump = 1e-3;       // expected minimal jump; threshold is 0.1 of it
  double threshold_fraction = 0.1;
  double panel_width = 0.05;
  int panel_order = 8;
  double monotone_floor = 1e-9;
  int threads = 0;
};

// Grid from lo to hi with the given spacing, always containing lo, hi and 0.
std::vector<double> uniform_grid(double lo, double hi, double step);

DistributionFunction stieltjes_invert(const MSampler& m, std::vector<double> s_grid,
                                      const StieltjesOptions& opts = {});

struct FourierOptions {
  PropagatorOptions propagation;
  int threads = 0;
};

struct FourierResult {
  std::vector<double> s_eval;
  std::vector<Vector> f_hat;
  std::vector<Matrix> weights;  // dσ mass attached to each s_eval (empty if none)
  double parseval_lhs = 0.0;
  double parseval_rhs = 0.0;
};

// f̂(s) = ∫ φ*(t,s) Δ(t) f(t) dt with φ(t,s) = Y(t,s)·frame (default frame U).
FourierResult fourier_transform(const BoundaryGeometry& geom, const VectorFunction& f,
                                const std::vector<double>& s_grid, const Matrix& frame = Matrix(),
                                const FourierOptions& opts = {});

// ∫(Δf, f) over [a, b].
double weighted_norm_squared(const SymmetricSystem& sys, const VectorFunction& f,
                             const PropagatorOptions& opts = {});

struct ParsevalReport {
  double defect = 0.0;
  FourierResult transform;  // evaluated on the support of dσ
};

// |∫(dσ f̂, f̂) − ∫(Δf, f)| / ∫(Δf, f), with jumps summed exactly and
// continuous increments above `continuous_floor` lumped at cell midpoints.
ParsevalReport parseval_defect(const BoundaryGeometry& geom, const DistributionFunction& sigma,
                               const VectorFunction& f, const Matrix& frame = Matrix(),
                               const FourierOptions& opts = {}, double continuous_floor = 1e-8);

struct InverseResult {
  std::vector<double> t;
  std::vector<Vector> values;
  double error = 0.0;  // relative Δ-seminorm error against f
};

// f_rec(t) = Σ φ(t,s_k) W_k f̂(s_k) over the support carried by `transform`.
InverseResult inverse_transform(const BoundaryGeometry& geom, const FourierResult& transform,
                                const std::vector<double>& t_grid, const VectorFunction& f,
                                const Matrix& frame = Matrix(), const FourierOptions& opts = {});

struct CharacteristicMatrix {
  cplx lambda;
  Matrix omega;          // blocks over 𝐇₀ ⊕ H₁⊥
  Matrix omega_natural;  // the same operator in the coordinates of 𝐇
};

CharacteristicMatrix characteristic_matrix(const MFunctionSample& m, const BoundaryGeometry& geom);

struct ResolventReport {
  double difference = 0.0;       // relative Δ-seminorm difference
  double ode_residual = 0.0;     // integral form of the ODE, max over nodes
  double boundary_residual = 0.0;
  std::vector<double> nodes;
  std::vector<Vector> y_kernel;
  std::vector<Vector> y_bvp;
};

// Resolvent applied to f once through the characteristic-matrix kernel and
// once by integrating the inhomogeneous boundary value problem.
ResolventReport resolvent_crosscheck(const BoundaryGeometry& geom, const TripletMaps& triplet,
                                     const BoundaryParameter& param, cplx lambda,
                                     const VectorFunction& f, const SolveOptions& opts = {});

// σ₂(s) = X σ₁(s) X*
DistributionFunction rebase_pseudospectral(const DistributionFunction& sigma, const Matrix& X);

struct ExistenceReport {
  bool definite = false;
  int null_manifold_dim = 0;
  bool companion_neutral = false;
  bool dimension_ok = false;
  bool tau_definite = false;
  bool mul_trivial = false;
  bool exists = false;           // pseudospectral function with respect to U
  bool spectral_exists = false;  // spectral function (needs trivial mul T)
  int n_sigma = 0;
  int lower_bound = 0;  // ν + ν̂
  int upper_bound = 0;  // n
  bool minimal = false;
  std::vector<std::string> notes;
};

ExistenceReport existence_report(const SymmetricSystem& sys, const Subspace& tau,
                                 cplx probe_lambda = cplx(0.0, 1.0));

}  // namespace specfun
