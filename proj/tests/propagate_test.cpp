#include <gtest/gtest.h>

#include <cmath>

#include "specfun/propagate.hpp"
#include "specfun/quadrature.hpp"
#include "toys.hpp"

namespace specfun {
namespace {

using testing::max_abs;

Matrix rotation(cplx angle) {
  Matrix y(2, 2);
  y << std::cos(angle), std::sin(angle), -std::sin(angle), std::cos(angle);
  return y;
}

// Δ(t) = (1 + t) I forces the Runge–Kutta path; since everything commutes,
// Y(t, λ) is the rotation by λ(t + t²/2).
SymmetricSystem growing_weight_system() {
  return SymmetricSystem(Dimensions{1, 0}, 0.0, 1.0, CoefficientField::constant(Matrix::Zero(2, 2)),
                         CoefficientField::polynomial({Matrix::Identity(2, 2), Matrix::Identity(2, 2)}));
}

TEST(Propagate, FreeHamiltonianIsRotation) {
  const SymmetricSystem sys = testing::toy2();
  for (cplx lambda : {cplx(1.0, 0.0), cplx(0.0, 1.0), cplx(2.0, -0.5)}) {
    for (double t : {0.0, 0.3, 1.0}) {
      EXPECT_LT(max_abs(propagate(sys, lambda, t) - rotation(lambda * t)), 1e-12)
          << "lambda " << lambda << " t " << t;
    }
  }
}

TEST(Propagate, IdentityAtLeftEndpoint) {
  EXPECT_EQ(propagate(testing::toy3(), cplx(1.0, 2.0), 0.0), Matrix::Identity(3, 3));
}

TEST(Propagate, MiddleChannelIsScalarExponential) {
  const cplx lambda(1.5, 0.5);
  const Matrix y = propagate(testing::toy3(), lambda, 0.7);
  EXPECT_LT(std::abs(y(1, 1) - std::exp(-I_unit * lambda * 0.7)), 1e-12);
}

TEST(Propagate, OutsideIntervalThrows) {
  try {
    propagate(testing::toy2(), cplx(1.0, 0.0), 1.5);
    FAIL() << "expected OutOfInterval";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfInterval);
  }
}

TEST(Propagate, RungeKuttaPathMatchesClosedForm) {
  const SymmetricSystem sys = growing_weight_system();
  const Propagator p(sys, cplx(2.0, 0.5));
  EXPECT_EQ(p.method(), PropagationMethod::AdaptiveRungeKutta);
  for (double t : {0.1, 0.55, 1.0}) {
    EXPECT_LT(max_abs(p.at(t) - rotation(cplx(2.0, 0.5) * (t + 0.5 * t * t))), 1e-9) << "t " << t;
  }
}

TEST(Propagate, SampleMatchesPointwiseEvaluation) {
  const Propagator p(growing_weight_system(), cplx(1.0, 1.0));
  const std::vector<double> times{0.0, 0.001, 0.2, 0.2, 0.5, 0.999, 1.0};
  const std::vector<Matrix> sampled = p.sample(times);
  ASSERT_EQ(sampled.size(), times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_LT(max_abs(sampled[i] - p.at(times[i])), 1e-10);
  }
}

TEST(Propagate, TransferComposes) {
  const Propagator p(testing::tabulated_system(), cplx(0.5, 1.0));
  const Matrix composed = p.transfer(0.3, 1.0) * p.at(0.3);
  EXPECT_LT(max_abs(composed - p.at(1.0)), 1e-9);
}

TEST(CheckpointGrid, ContainsBreakpoints) {
  const std::vector<double> grid = checkpoint_grid(testing::tabulated_system(), 3);
  for (double p : {0.25, 0.5, 0.75}) {
    EXPECT_NE(std::find(grid.begin(), grid.end(), p), grid.end()) << p;
  }
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 1.0);
  EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
}

TEST(GreenIdentity, SymplecticWhenParametersCoincide) {
  EXPECT_LT(green_identity_defect(testing::toy2(), cplx(1.0, 0.5), cplx(1.0, 0.5), 1.0), 1e-10);
  EXPECT_LT(green_identity_defect(testing::tabulated_system(), cplx(3.0, 0.2), cplx(3.0, 0.2), 0.6), 1e-8);
}

TEST(GreenIdentity, DistinctSpectralParameters) {
  EXPECT_LT(green_identity_defect(testing::toy2(), cplx(0.0, 1.0), cplx(0.0, 2.0), 1.0), 1e-8);
  EXPECT_LT(green_identity_defect(testing::toy3(), cplx(1.0, 1.0), cplx(-2.0, 0.5), 0.8), 1e-8);
}

TEST(GreenIdentity, VanishingCoefficients) {
  const SymmetricSystem sys(Dimensions{1, 0}, 0.0, 1.0, CoefficientField::constant(Matrix::Zero(2, 2)),
                            CoefficientField::constant(Matrix::Zero(2, 2)));
  EXPECT_EQ(green_identity_defect(sys, cplx(0.0, 1.0), cplx(0.0, 2.0), 1.0), 0.0);
}

TEST(WeightedInner, ConstantVector) {
  const VectorFunction f = [](double) {
    Vector v(2);
    v << 1.0, 0.0;
    return v;
  };
  EXPECT_NEAR(std::abs(weighted_inner(testing::toy2(), f, f) - 1.0), 0.0, 1e-12);
}

TEST(WeightedInner, ZeroWeight) {
  const SymmetricSystem sys(Dimensions{1, 0}, 0.0, 1.0, CoefficientField::constant(Matrix::Zero(2, 2)),
                            CoefficientField::constant(Matrix::Zero(2, 2)));
  const VectorFunction f = [](double t) {
    Vector v(2);
    v << 1.0 + t, t * t;
    return v;
  };
  EXPECT_EQ(weighted_inner(sys, f, f), cplx(0.0));
}

TEST(WeightedInner, PythagoreanIdentity) {
  const double s = 3.7;
  const VectorFunction f = [s](double t) {
    Vector v(2);
    v << std::cos(s * t), -std::sin(s * t);
    return v;
  };
  EXPECT_NEAR(std::abs(weighted_inner(testing::toy2(), f, f) - 1.0), 0.0, 1e-13);
}

TEST(WeightedGram, SolutionFramesAgreeWithPointwiseInner) {
  const SymmetricSystem sys = testing::toy2();
  auto prop = std::make_shared<const Propagator>(sys, cplx(1.0, 0.0));
  const SolutionFrame frame(prop, Matrix::Identity(2, 2).leftCols(1));
  // y = (cos t, −sin t), so ∫|y|² = 1.
  EXPECT_LT(max_abs(weighted_gram(sys, frame, frame) - Matrix::Identity(1, 1)), 1e-12);
}

TEST(SolutionGraph, FrameSpansGraphOfTransfer) {
  const SymmetricSystem sys = testing::tabulated_system();
  const cplx lambda(2.0, 0.5);
  const GraphFrame g = solution_graph(sys, lambda);
  const Matrix yb = propagate(sys, lambda, 1.0);
  EXPECT_LT(max_abs(yb * g.P - g.Q), 1e-9);
  Matrix stacked(4, 2);
  stacked << g.P, g.Q;
  EXPECT_LT(max_abs(stacked.adjoint() * stacked - Matrix::Identity(2, 2)), 1e-12);
}

TEST(SolutionGraph, StaysFiniteFarFromRealAxis) {
  for (const SymmetricSystem& sys : {testing::toy2(), testing::tabulated_system()}) {
    const GraphFrame g = solution_graph(sys, cplx(0.0, 1e3));
    EXPECT_TRUE(g.P.allFinite());
    EXPECT_TRUE(g.Q.allFinite());
  }
  const GraphFrame g = solution_graph(testing::toy2(), cplx(0.0, 1e6));
  EXPECT_TRUE(g.P.allFinite() && g.Q.allFinite());
}

TEST(IntegrateAdaptive, ScalarExponential) {
  const MatrixRhs rhs = [](double, const Matrix& z) -> Matrix { return cplx(-2.0, 3.0) * z; };
  double h = 0.0;
  const Matrix z = integrate_adaptive(rhs, 0.0, 1.5, Matrix::Ones(1, 1), h, 1e-11, 1e-13);
  EXPECT_LT(std::abs(z(0, 0) - std::exp(cplx(-2.0, 3.0) * 1.5)), 1e-9);
}

TEST(IntegrateAdaptive, NonFiniteRightSideFails) {
  const MatrixRhs rhs = [](double, const Matrix& z) -> Matrix {
    return z * std::numeric_limits<double>::quiet_NaN();
  };
  double h = 0.0;
  try {
    integrate_adaptive(rhs, 0.0, 1.0, Matrix::Ones(1, 1), h, 1e-10, 1e-12);
    FAIL() << "expected StepSizeUnderflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StepSizeUnderflow);
  }
}

TEST(Quadrature, GaussLegendreExactForPolynomials) {
  for (int order : {8, 16, 32, 64}) {
    const GaussLegendreRule& rule = gauss_legendre(order);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * std::pow(rule.nodes[i], 2 * order - 2);
    EXPECT_NEAR(acc, 2.0 / (2 * order - 1), 1e-14) << order;
  }
}

TEST(Quadrature, UnsupportedOrderThrows) { EXPECT_THROW(gauss_legendre(7), Error); }

TEST(Quadrature, CumulativeIntegralOfPolynomial) {
  const CompositeQuadrature q = composite_gauss_legendre(0.0, 2.0, 4, 8);
  std::vector<Matrix> samples;
  for (double x : q.nodes) samples.push_back(Matrix::Constant(1, 1, 3.0 * x * x));
  const std::vector<Matrix> cum = cumulative_integral(q, samples);
  for (std::size_t i = 0; i < q.size(); ++i) {
    EXPECT_NEAR(cum[i](0, 0).real(), std::pow(q.nodes[i], 3), 1e-13);
  }
}

}  // namespace
}  // namespace specfun
