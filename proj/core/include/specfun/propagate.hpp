#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "specfun/quadrature.hpp"
#include "specfun/system.hpp"

namespace specfun {

enum class PropagationMethod { AdaptiveRungeKutta, Exponential };

struct PropagatorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  int checkpoints = 256;
  int quadrature_order = 32;
  // Largest ‖A‖·h allowed for one transfer segment when boundary data are
  // marched in orthonormalized form (bounds growth per segment by e^8).
  double segment_growth = 8.0;
  std::size_t max_steps = 50'000'000;
};

// Fundamental matrix Y(t, λ) of y' = -J(B + λΔ) y with Y(a, λ) = I, stored at
// checkpoints and re-integrated in between.
class Propagator {
 public:
  Propagator(const SymmetricSystem& sys, cplx lambda, PropagatorOptions opts = {});

  const SymmetricSystem& system() const { return sys_; }
  cplx lambda() const { return lambda_; }
  PropagationMethod method() const { return method_; }
  const PropagatorOptions& options() const { return opts_; }

  const std::vector<double>& checkpoint_times() const { return times_; }
  const std::vector<Matrix>& checkpoint_values() const { return values_; }

  Matrix at(double t) const;
  // Y at each of the given nondecreasing times.
  std::vector<Matrix> sample(const std::vector<double>& times) const;
  // Transfer matrix Φ with y(t1) = Φ y(t0), integrated from the identity.
  Matrix transfer(double t0, double t1) const;

  // Composite Gauss–Legendre rule over the checkpoint panels.
  CompositeQuadrature quadrature() const;

 private:
  SymmetricSystem sys_;
  cplx lambda_;
  PropagatorOptions opts_;
  PropagationMethod method_;
  std::vector<double> times_;
  std::vector<Matrix> values_;
};

// Checkpoint grid: uniform points on [a, b] merged with coefficient breakpoints.
std::vector<double> checkpoint_grid(const SymmetricSystem& sys, int checkpoints);

Matrix propagate(const SymmetricSystem& sys, cplx lambda, double t, PropagatorOptions opts = {});

// Orthonormal frame [P; Q] (2n x n) of the graph {(c, Y(b,λ)c)}, so that
// Y(b,λ) P = Q.  Built segment by segment with re-orthonormalization, which
// keeps the data representable when Y(b,λ) itself would overflow.
struct GraphFrame {
  Matrix P;
  Matrix Q;
};

GraphFrame solution_graph(const SymmetricSystem& sys, cplx lambda, PropagatorOptions opts = {});

// ‖Y*(t,λ̄) J Y(t,μ) − J − (μ−λ) ∫_a^t Y*(s,λ̄) Δ(s) Y(s,μ) ds‖₂
double green_identity_defect(const SymmetricSystem& sys, cplx lambda, cplx mu, double t,
                             PropagatorOptions opts = {});

using VectorFunction = std::function<Vector(double)>;
using FrameFunction = std::function<Matrix(double)>;

// Solution frame t ↦ Y(t,λ) K.
class SolutionFrame {
 public:
  SolutionFrame(std::shared_ptr<const Propagator> propagator, Matrix initial);

  const Matrix& initial() const { return initial_; }
  const Propagator& propagator() const { return *propagator_; }
  Matrix operator()(double t) const;
  std::vector<Matrix> sample(const std::vector<double>& times) const;

 private:
  std::shared_ptr<const Propagator> propagator_;
  Matrix initial_;
};

// ∫_a^b (Δ(t) f(t), g(t)) dt = ∫ g* Δ f.
cplx weighted_inner(const SymmetricSystem& sys, const VectorFunction& f, const VectorFunction& g,
                    const CompositeQuadrature& q);
cplx weighted_inner(const SymmetricSystem& sys, const VectorFunction& f, const VectorFunction& g);

// Gram matrix ∫ G*(t) Δ(t) F(t) dt from frame values sampled at the nodes of q.
Matrix weighted_gram(const SymmetricSystem& sys, const CompositeQuadrature& q,
                     const std::vector<Matrix>& f_values, const std::vector<Matrix>& g_values);
Matrix weighted_gram(const SymmetricSystem& sys, const SolutionFrame& f, const SolutionFrame& g);

// Adaptive Dormand–Prince 5(4) integration of Z' = rhs(t, Z) from t0 to t1.
// `h` carries the step size between calls (0 lets the integrator choose).
using MatrixRhs = std::function<Matrix(double, const Matrix&)>;
Matrix integrate_adaptive(const MatrixRhs& rhs, double t0, double t1, Matrix z0, double& h,
                          double rtol, double atol, std::size_t max_steps = 50'000'000);

}  // namespace specfun
