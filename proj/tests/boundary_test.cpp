#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "specfun/boundary.hpp"
#include "toys.hpp"

namespace specfun {
namespace {

using testing::max_abs;

Vector unit(Eigen::Index n, Eigen::Index i) { return Vector::Unit(n, i); }

TEST(JCompanion, HamiltonianFirstAxisIsSelfCompanion) {
  const SymmetricSystem sys = testing::toy2();
  const Subspace tau = testing::toy2_tau();
  EXPECT_LT(linalg::max_principal_angle_sine(j_companion(sys, tau), tau), 1e-14);
}

TEST(JCompanion, FullSpaceGivesZero) {
  EXPECT_EQ(j_companion(testing::toy3(), Subspace::full(3)).dim(), 0);
}

TEST(JCompanion, IsAnInvolution) {
  std::mt19937_64 rng(7);
  const SymmetricSystem sys = testing::free_system(2, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index k = 1 + trial % 4;
    const Subspace tau(testing::random_matrix(rng, 5, k));
    const Subspace back = j_companion(sys, j_companion(sys, tau));
    EXPECT_LT(linalg::max_principal_angle_sine(back, tau), 1e-12);
  }
}

TEST(Neutral, Examples) {
  const SymmetricSystem sys = testing::toy2();
  EXPECT_TRUE(is_neutral(sys, Subspace::zero(2)));
  EXPECT_TRUE(is_neutral(sys, testing::toy2_tau()));
  EXPECT_FALSE(is_neutral(sys, Subspace::full(2)));
  EXPECT_FALSE(is_neutral(testing::toy3(), testing::leading_span(3, 2)));
}

TEST(BuildX, HamiltonianFormula) {
  Matrix expected(2, 2);
  expected << cplx(0, -1), 1.0, cplx(0, 1), 1.0;
  expected /= std::sqrt(2.0);
  EXPECT_LT(max_abs(build_X(Dimensions{1, 0}) - expected), 1e-15);
}

TEST(BuildX, UnitaryAndIntertwinesSignatures) {
  for (const Dimensions dims : {Dimensions{1, 0}, Dimensions{1, 1}, Dimensions{2, 1}, Dimensions{3, 2}}) {
    const Matrix X = build_X(dims);
    const Eigen::Index n = dims.n();
    EXPECT_LT(max_abs(X.adjoint() * X - Matrix::Identity(n, n)), 1e-14);
    EXPECT_LT(max_abs(X * X.adjoint() - Matrix::Identity(n, n)), 1e-14);
    EXPECT_LT(max_abs(X.adjoint() * build_J_hat(dims) * X - build_signature(dims)), 1e-14);
  }
}

TEST(CompleteTau, FromZeroSubspace) {
  for (const SymmetricSystem& sys : {testing::toy2(), testing::toy3(), testing::free_system(2, 1)}) {
    const Subspace eta = Subspace::zero(sys.n());
    const Subspace tau = complete_tau(sys, eta);
    EXPECT_EQ(tau.dim(), sys.dims().nu + sys.dims().nu_hat);
    EXPECT_TRUE(testing::check_completion(sys, eta, tau).ok());
  }
}

TEST(CompleteTau, AvoidsGivenNeutralSubspace) {
  const SymmetricSystem sys = testing::toy2();
  const Subspace eta = testing::leading_span(2, 1);
  const Subspace tau = complete_tau(sys, eta);
  const testing::CompletionCheck c = testing::check_completion(sys, eta, tau);
  EXPECT_TRUE(c.trivial_intersection);
  EXPECT_TRUE(c.ok());
}

TEST(CompleteTau, RandomNeutralInputs) {
  std::mt19937_64 rng(11);
  const SymmetricSystem sys = testing::free_system(2, 1);
  for (int trial = 0; trial < 30; ++trial) {
    const Subspace eta = testing::random_neutral(rng, sys.dims(), trial % 3);
    ASSERT_TRUE(is_neutral(sys, eta));
    EXPECT_TRUE(testing::check_completion(sys, eta, complete_tau(sys, eta)).ok()) << "trial " << trial;
  }
}

TEST(CompleteTau, RejectsNonNeutralInput) {
  try {
    complete_tau(testing::toy2(), Subspace::full(2));
    FAIL() << "expected EtaNotNeutral";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EtaNotNeutral);
  }
}

TEST(Geometry, AlignedTauGivesIdentity) {
  const BoundaryGeometry g2 = build_geometry(testing::toy2(), testing::toy2_tau());
  EXPECT_LT(max_abs(g2.U_tilde - Matrix::Identity(2, 2)), 1e-14);
  const BoundaryGeometry g3 = build_geometry(testing::toy3(), testing::toy3_tau());
  EXPECT_LT(max_abs(g3.U_tilde - Matrix::Identity(3, 3)), 1e-14);
}

TEST(Geometry, SecondAxisTau) {
  const SymmetricSystem sys = testing::toy2();
  const Subspace tau(Matrix(unit(2, 1)));
  const BoundaryGeometry g = build_geometry(sys, tau);
  const Matrix& U = g.U_tilde;
  EXPECT_LT(max_abs(U.adjoint() * sys.J() * U - sys.J()), 1e-14);
  EXPECT_LT(max_abs(U * g.U_tilde_inv - Matrix::Identity(2, 2)), 1e-14);
  EXPECT_LT(linalg::max_principal_angle_sine(Subspace(g.U), tau), 1e-14);
  // The rotation [[0, −1], [1, 0]] is one valid choice; ours may differ by a phase on 𝐇₀.
  Matrix reference(2, 2);
  reference << 0.0, -1.0, 1.0, 0.0;
  EXPECT_LT(max_abs(reference.adjoint() * sys.J() * reference - sys.J()), 1e-15);
  EXPECT_NEAR(std::abs((reference.col(0).adjoint() * U.col(0))(0, 0)), 1.0, 1e-14);
}

TEST(Geometry, MinimalDimensionHasNoH1) {
  const BoundaryGeometry g = build_geometry(testing::toy3(), testing::toy3_tau());
  EXPECT_EQ(g.h1_dim, 0);
  EXPECT_EQ(g.h1perp_dim, 1);
  // 𝐇₀ = H ⊕ Ĥ
  EXPECT_EQ(g.dim_h0(), 2);
  EXPECT_EQ(g.dim_dot(), 2);
}

TEST(Geometry, NonMinimalTau) {
  const SymmetricSystem sys = testing::free_system(2, 0);
  // τ = span{e₁, e₂, e₃}: τ⊖ = span{e₂} is neutral, so H₁ has dimension 1.
  const BoundaryGeometry g = build_geometry(sys, testing::leading_span(4, 3));
  EXPECT_EQ(g.h1perp_dim, 1);
  EXPECT_EQ(g.h1_dim, 1);
  EXPECT_EQ(g.dim_h0(), 3);
  EXPECT_LT(max_abs(g.U_tilde.adjoint() * sys.J() * g.U_tilde - sys.J()), 1e-13);
  EXPECT_LT(linalg::max_principal_angle_sine(Subspace(g.U), g.tau), 1e-13);
}

TEST(Geometry, RejectsNonNeutralCompanion) {
  try {
    build_geometry(testing::toy3(), testing::leading_span(3, 1));
    FAIL() << "expected TauNotAdmissible";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TauNotAdmissible);
  }
}

TEST(Geometry, RejectsNullStartInTau) {
  Matrix delta = Matrix::Zero(2, 2);
  delta(0, 0) = 1.0;
  const SymmetricSystem sys(Dimensions{1, 0}, 0.0, 1.0, CoefficientField::constant(Matrix::Zero(2, 2)),
                            CoefficientField::constant(delta));
  try {
    build_geometry(sys, Subspace(Matrix(unit(2, 1))));
    FAIL() << "expected NotTauDefinite";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotTauDefinite);
  }
}

TEST(GammaB, HamiltonianTraces) {
  const GammaB gb = build_gamma_b(testing::toy2());
  EXPECT_EQ(gb.G0b, Matrix(unit(2, 0).transpose()));
  EXPECT_EQ(gb.G1b, Matrix(unit(2, 1).transpose()));
  EXPECT_EQ(gb.Ghat.rows(), 0);
}

TEST(GammaB, MiddleChannelTrace) {
  const GammaB gb = build_gamma_b(testing::toy3());
  EXPECT_EQ(gb.Ghat, Matrix(unit(3, 1).transpose()));
}

TEST(GammaB, LagrangeFormDecomposition) {
  // (Jy, z) = (Γ₀y, Γ₁z) − (Γ₁y, Γ₀z) + i(Γ̂y, Γ̂z)
  std::mt19937_64 rng(3);
  for (const SymmetricSystem& sys : {testing::toy2(), testing::toy3(), testing::free_system(2, 3)}) {
    const GammaB gb = build_gamma_b(sys);
    for (int trial = 0; trial < 100; ++trial) {
      const Matrix y = testing::random_matrix(rng, sys.n(), 1);
      const Matrix z = testing::random_matrix(rng, sys.n(), 1);
      const cplx lhs = (z.adjoint() * sys.J() * y)(0, 0);
      const cplx rhs = ((gb.G1b * z).adjoint() * (gb.G0b * y))(0, 0) -
                       ((gb.G0b * z).adjoint() * (gb.G1b * y))(0, 0) +
                       I_unit * ((gb.Ghat * z).adjoint() * (gb.Ghat * y))(0, 0);
      EXPECT_LT(std::abs(lhs - rhs), 1e-14);
    }
  }
}

TEST(Triplet, Shapes) {
  const BoundaryGeometry g = build_geometry(testing::toy3(), testing::toy3_tau());
  const TripletMaps t = build_triplet(g);
  EXPECT_EQ(t.G0.rows(), 3);
  EXPECT_EQ(t.G1.rows(), 3);
  EXPECT_EQ(t.G0.cols(), 6);
  EXPECT_EQ(t.G0_dot.rows(), 3 - g.h1perp_dim);
  EXPECT_EQ(t.G1_dot.rows(), 3 - g.h1perp_dim);
}

TEST(Triplet, AbstractGreenIdentity) {
  std::mt19937_64 rng(5);
  const std::vector<std::pair<SymmetricSystem, Subspace>> cases{
      {testing::toy2(), testing::toy2_tau()},
      {testing::toy3(), testing::toy3_tau()},
      {testing::free_system(2, 0), testing::leading_span(4, 3)},
      {testing::toy2(), Subspace(Matrix(unit(2, 1)))}};
  for (const auto& [sys, tau] : cases) {
    const BoundaryGeometry g = build_geometry(sys, tau);
    const TripletMaps t = build_triplet(g);
    for (int trial = 0; trial < 100; ++trial) {
      const Vector wy = testing::random_matrix(rng, 2 * sys.n(), 1);
      const Vector wz = testing::random_matrix(rng, 2 * sys.n(), 1);
      EXPECT_LT(green_identity_residual(g, t, wy, wz), 1e-13);
    }
  }
}

TEST(Triplet, MinimalCaseReducedForm) {
  // With Ũ = I and H₁ = {0}: Γ̇′₀ = (i(Γ̂ₐ − Γ̂_b), Γ₀b) on (y(a), y(b)).
  const BoundaryGeometry g = build_geometry(testing::toy3(), testing::toy3_tau());
  const TripletMaps t = build_triplet(g);
  Matrix expected = Matrix::Zero(2, 6);
  expected(0, 1) = I_unit;
  expected(0, 4) = -I_unit;
  expected(1, 3) = 1.0;
  EXPECT_LT(max_abs(t.G0_dot - expected), 1e-14);
}

}  // namespace
}  // namespace specfun
