#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "specfun/spectral.hpp"
#include "specfun/weyl.hpp"
#include "toys.hpp"

namespace specfun {
namespace {

using std::numbers::pi;
using testing::max_abs;
using testing::scalar;

MSampler scalar_sampler(std::function<cplx(cplx)> f) {
  return [f = std::move(f)](cplx lambda) { return scalar(f(lambda)); };
}

VectorFunction dirichlet_mode(double s) {
  return [s](double t) {
    Vector v(2);
    v << std::cos(s * t), -std::sin(s * t);
    return v;
  };
}

VectorFunction zero_function(Eigen::Index n) {
  return [n](double) { return Vector(Vector::Zero(n)); };
}

struct Toy {
  BoundaryGeometry geom;
  TripletMaps triplet;
};

Toy make_toy(const SymmetricSystem& sys, const Subspace& tau) {
  BoundaryGeometry g = build_geometry(sys, tau);
  TripletMaps t = build_triplet(g);
  return {std::move(g), std::move(t)};
}

DistributionFunction dirichlet_sigma(const Toy& toy, double window) {
  const BoundaryParameter p = BoundaryParameter::identity_zero(1);
  const MSampler m = [&toy, p](cplx lambda) { return m_tau(toy.geom, toy.triplet, p, lambda).value; };
  return stieltjes_invert(m, uniform_grid(-window, window, 0.25));
}

TEST(UniformGrid, ContainsEndpointsAndOrigin) {
  const std::vector<double> g = uniform_grid(-1.1, 2.0, 0.5);
  EXPECT_EQ(g.front(), -1.1);
  EXPECT_EQ(g.back(), 2.0);
  EXPECT_NE(std::find(g.begin(), g.end(), 0.0), g.end());
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
}

TEST(Stieltjes, ConstantImaginaryUnitIsLebesgue) {
  const DistributionFunction sigma = stieltjes_invert(scalar_sampler([](cplx) { return I_unit; }),
                                                      uniform_grid(-2.0, 2.0, 0.5));
  EXPECT_TRUE(sigma.jumps.empty());
  for (std::size_t i = 0; i < sigma.grid.size(); ++i) {
    EXPECT_NEAR(sigma.values[i](0, 0).real(), sigma.grid[i] / pi, 1e-6) << sigma.grid[i];
  }
}

TEST(Stieltjes, PointMassAtOrigin) {
  const DistributionFunction sigma =
      stieltjes_invert(scalar_sampler([](cplx l) { return -1.0 / l; }), uniform_grid(-2.0, 2.0, 0.5));
  ASSERT_EQ(sigma.jumps.size(), 1u);
  EXPECT_NEAR(sigma.jumps[0].location, 0.0, 1e-9);
  EXPECT_NEAR(sigma.jumps[0].size(0, 0).real(), 1.0, 1e-6);
  for (std::size_t i = 0; i < sigma.grid.size(); ++i) {
    // left-continuous with σ(0) = 0
    const double expected = sigma.grid[i] > 0.0 ? 1.0 : 0.0;
    EXPECT_NEAR(sigma.values[i](0, 0).real(), expected, 1e-6) << sigma.grid[i];
  }
}

TEST(Stieltjes, TangentJumps) {
  const DistributionFunction sigma =
      stieltjes_invert(scalar_sampler([](cplx l) { return std::tan(l); }), uniform_grid(-8.0, 8.0, 0.25));
  // (k + ½)π in [−8, 8] for k = −3..2
  ASSERT_EQ(sigma.jumps.size(), 6u);
  for (std::size_t i = 0; i < sigma.jumps.size(); ++i) {
    const double expected = (static_cast<double>(i) - 3.0 + 0.5) * pi;
    EXPECT_NEAR(sigma.jumps[i].location, expected, 1e-6);
    EXPECT_NEAR(sigma.jumps[i].size(0, 0).real(), 1.0, 1e-3);
  }
  EXPECT_TRUE(sigma.diverged_cells.empty());
}

TEST(Stieltjes, MonotoneValues) {
  const DistributionFunction sigma = stieltjes_invert(
      scalar_sampler([](cplx l) { return std::tan(l) + I_unit; }), uniform_grid(-3.0, 3.0, 0.25));
  for (std::size_t i = 1; i < sigma.values.size(); ++i) {
    EXPECT_GE(sigma.values[i](0, 0).real() - sigma.values[i - 1](0, 0).real(), -1e-9);
  }
}

TEST(Fourier, ZeroInput) {
  const Toy toy = make_toy(testing::toy2(), testing::toy2_tau());
  const FourierResult r = fourier_transform(toy.geom, zero_function(2), {0.5 * pi, 1.5 * pi});
  for (const Vector& v : r.f_hat) EXPECT_EQ(v.norm(), 0.0);
}

TEST(Fourier, EigenfunctionsAreOrthonormal) {
  const Toy toy = make_toy(testing::toy2(), testing::toy2_tau());
  std::vector<double> s;
  for (int j = 0; j < 4; ++j) s.push_back((j + 0.5) * pi);
  for (int k = 0; k < 4; ++k) {
    const FourierResult r = fourier_transform(toy.geom, dirichlet_mode(s[k]), s);
    for (int j = 0; j < 4; ++j) {
      EXPECT_NEAR(std::abs(r.f_hat[j](0) - (j == k ? 1.0 : 0.0)), 0.0, 1e-10) << j << " " << k;
    }
  }
}

TEST(Fourier, Linearity) {
  const Toy toy = make_toy(testing::toy3(), testing::toy3_tau());
  const VectorFunction f = [](double t) {
    Vector v(3);
    v << 1.0, t, t * t;
    return v;
  };
  const VectorFunction g = [](double t) {
    Vector v(3);
    v << std::sin(t), cplx(0.0, 1.0), std::exp(t);
    return v;
  };
  const cplx alpha(0.3, -1.2);
  const cplx beta(2.0, 0.5);
  const VectorFunction h = [&](double t) { return Vector(alpha * f(t) + beta * g(t)); };
  const std::vector<double> s{-2.0, 0.5, 4.0};
  const FourierResult rf = fourier_transform(toy.geom, f, s);
  const FourierResult rg = fourier_transform(toy.geom, g, s);
  const FourierResult rh = fourier_transform(toy.geom, h, s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_LT((rh.f_hat[i] - alpha * rf.f_hat[i] - beta * rg.f_hat[i]).norm(), 1e-12);
  }
}

TEST(Parseval, SingleEigenfunction) {
  const Toy toy = make_toy(testing::toy2(), testing::toy2_tau());
  const DistributionFunction sigma = dirichlet_sigma(toy, 10.0);
  const ParsevalReport r = parseval_defect(toy.geom, sigma, dirichlet_mode(1.5 * pi));
  EXPECT_LE(r.defect, 1e-6);
}

TEST(Parseval, ZeroWeightGivesZeroDefect) {
  const Toy toy = make_toy(testing::toy2(), testing::toy2_tau());
  const DistributionFunction sigma = dirichlet_sigma(toy, 5.0);
  EXPECT_EQ(parseval_defect(toy.geom, sigma, zero_function(2)).defect, 0.0);
}

TEST(Parseval, DefectShrinksWithWindow) {
  const Toy toy = make_toy(testing::toy2(), testing::toy2_tau());
  const VectorFunction f = [](double t) {
    Vector v(2);
    v << 1.0 - t * t, t;
    return v;
  };
  double previous = std::numeric_limits<double>::infinity();
  for (int K : {2, 5, 10}) {
    const double defect = parseval_defect(toy.geom, dirichlet_sigma(toy, (K + 0.5) * pi), f).defect;
    EXPECT_LT(defect, previous) << K;
    previous = defect;
  }
}

TEST(Inverse, EigenfunctionReconstruction) {
  const Toy toy = make_toy(testing::toy2(), testing::toy2_tau());
  const DistributionFunction sigma = dirichlet_sigma(toy, 10.0);
  const VectorFunction f = dirichlet_mode(2.5 * pi);
  const ParsevalReport pr = parseval_defect(toy.geom, sigma, f);
  const InverseResult r = inverse_transform(toy.geom, pr.transform, {0.0, 0.5, 1.0}, f);
  EXPECT_LE(r.error, 1e-6);
  ASSERT_EQ(r.values.size(), 3u);
  EXPECT_LT((r.values[1] - f(0.5)).norm(), 1e-6);
}

TEST(Inverse, ZeroTransformGivesZero) {
  const Toy toy = make_toy(testing::toy2(), testing::toy2_tau());
  const DistributionFunction sigma = dirichlet_sigma(toy, 5.0);
  const ParsevalReport pr = parseval_defect(toy.geom, sigma, zero_function(2));
  const InverseResult r = inverse_transform(toy.geom, pr.transform, {0.0, 0.3, 1.0}, zero_function(2));
  for (const Vector& v : r.values) EXPECT_EQ(v.norm(), 0.0);
}

TEST(Inverse, ErrorShrinksWithWindow) {
  const Toy toy = make_toy(testing::toy2(), testing::toy2_tau());
  const VectorFunction f = [](double t) {
    Vector v(2);
    v << 1.0 - t * t, t;
    return v;
  };
  double previous = std::numeric_limits<double>::infinity();
  for (int K : {2, 5, 10}) {
    const ParsevalReport pr = parseval_defect(toy.geom, dirichlet_sigma(toy, (K + 0.5) * pi), f);
    const double error = inverse_transform(toy.geom, pr.transform, {0.5}, f).error;
    EXPECT_LT(error, previous) << K;
    previous = error;
  }
}

TEST(CharacteristicMatrix, Toy2Form) {
  const Toy toy = make_toy(testing::toy2(), testing::toy2_tau());
  const cplx lambda(0.4, 1.3);
  const MFunctionSample m = m_tau(toy.geom, toy.triplet, BoundaryParameter::identity_zero(1), lambda);
  const CharacteristicMatrix c = characteristic_matrix(m, toy.geom);
  Matrix expected(2, 2);
  expected << m.value(0, 0), -0.5, -0.5, 0.0;
  EXPECT_LT(max_abs(c.omega - expected), 1e-14);
}

TEST(CharacteristicMatrix, ShapeAndNevanlinnaClass) {
  const Toy toy = make_toy(testing::toy3(), testing::toy3_tau());
  std::mt19937_64 rng(41);
  const BoundaryParameter p = testing::random_valid_pair(rng, 2);
  for (cplx lambda : {cplx(0, 1), cplx(2, 0.3), cplx(-1, 0.05)}) {
    const CharacteristicMatrix c = characteristic_matrix(m_tau(toy.geom, toy.triplet, p, lambda), toy.geom);
    const Eigen::Index k = toy.geom.h1perp_dim;
    const Eigen::Index d = toy.geom.dim_h0();
    ASSERT_EQ(c.omega.rows(), d + k);
    EXPECT_EQ(max_abs(c.omega.bottomRightCorner(k, k)), 0.0);
    EXPECT_GE(linalg::min_eigenvalue(linalg::imag_part(c.omega)), -1e-9);
  }
}

TEST(Resolvent, NeumannConstantForcing) {
  const Toy toy = make_toy(testing::toy2(), testing::toy2_tau());
  const VectorFunction f = [](double) {
    Vector v(2);
    v << 1.0, 0.0;
    return v;
  };
  const ResolventReport r =
      resolvent_crosscheck(toy.geom, toy.triplet, BoundaryParameter::zero_identity(1), cplx(0, 1), f);
  EXPECT_LE(r.difference, 1e-6);
  EXPECT_LE(r.ode_residual, 1e-8);
  EXPECT_LE(r.boundary_residual, 1e-8);
}

TEST(Resolvent, TabulatedSystem) {
  const Toy toy = make_toy(testing::tabulated_system(), testing::toy2_tau());
  const VectorFunction f = [](double t) {
    Vector v(2);
    v << 1.0, cplx(-1.0, 1.0) * t;
    return v;
  };
  const ResolventReport r = resolvent_crosscheck(
      toy.geom, toy.triplet, BoundaryParameter::constant(scalar(1.0), scalar(0.5)), cplx(0.5, 1.0), f);
  EXPECT_LE(r.difference, 1e-6);
}

TEST(Rebase, IdentityAndScaling) {
  const DistributionFunction sigma =
      stieltjes_invert(scalar_sampler([](cplx l) { return std::tan(l); }), uniform_grid(-2.0, 2.0, 0.5));
  const DistributionFunction same = rebase_pseudospectral(sigma, Matrix::Identity(1, 1));
  const DistributionFunction scaled = rebase_pseudospectral(sigma, scalar(2.0));
  for (std::size_t i = 0; i < sigma.values.size(); ++i) {
    EXPECT_EQ(same.values[i], sigma.values[i]);
    EXPECT_LT(max_abs(scaled.values[i] - 4.0 * sigma.values[i]), 1e-14);
  }
  EXPECT_THROW(rebase_pseudospectral(sigma, Matrix::Identity(2, 2)), Error);
}

TEST(Rebase, PreservesMonotonicity) {
  const Toy toy = make_toy(testing::toy3(), testing::toy3_tau());
  const BoundaryParameter p = BoundaryParameter::identity_zero(2);
  const MSampler m = [&](cplx lambda) { return m_tau(toy.geom, toy.triplet, p, lambda).value; };
  const DistributionFunction sigma = stieltjes_invert(m, uniform_grid(-4.0, 4.0, 0.5));
  std::mt19937_64 rng(43);
  const DistributionFunction re = rebase_pseudospectral(sigma, testing::random_matrix(rng, 2, 2));
  for (std::size_t i = 1; i < re.values.size(); ++i) {
    EXPECT_GE(linalg::min_eigenvalue(re.values[i] - re.values[i - 1]), -1e-8);
  }
}

TEST(Existence, Toys) {
  const ExistenceReport r2 = existence_report(testing::toy2(), testing::toy2_tau());
  EXPECT_TRUE(r2.exists);
  EXPECT_TRUE(r2.minimal);
  EXPECT_EQ(r2.n_sigma, 1);
  const ExistenceReport r3 = existence_report(testing::toy3(), testing::toy3_tau());
  EXPECT_TRUE(r3.exists);
  EXPECT_TRUE(r3.minimal);
  EXPECT_EQ(r3.n_sigma, 2);
}

TEST(Existence, NullStartIsFlagged) {
  Matrix delta = Matrix::Zero(2, 2);
  delta(0, 0) = 1.0;
  const SymmetricSystem sys(Dimensions{1, 0}, 0.0, 1.0, CoefficientField::constant(Matrix::Zero(2, 2)),
                            CoefficientField::constant(delta));
  const ExistenceReport r = existence_report(sys, Subspace(Matrix(Vector::Unit(2, 1))));
  EXPECT_FALSE(r.definite);
  EXPECT_FALSE(r.tau_definite);
  EXPECT_FALSE(r.exists);
  EXPECT_FALSE(r.notes.empty());
}

}  // namespace
}  // namespace specfun
