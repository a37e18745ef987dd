#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "specfun/nevanlinna.hpp"
#include "specfun/weyl.hpp"
#include "toys.hpp"

namespace specfun {
namespace {

using testing::max_abs;
using testing::scalar;

struct Toy {
  BoundaryGeometry geom;
  TripletMaps triplet;
};

Toy make_toy(const SymmetricSystem& sys, const Subspace& tau) {
  BoundaryGeometry g = build_geometry(sys, tau);
  TripletMaps t = build_triplet(g);
  return {std::move(g), std::move(t)};
}

Toy toy2() { return make_toy(testing::toy2(), testing::toy2_tau()); }
Toy toy3() { return make_toy(testing::toy3(), testing::toy3_tau()); }

std::vector<cplx> lambda_grid() {
  std::vector<cplx> out;
  for (int k = 0; k < 10; ++k) out.emplace_back(-2.3 + 0.5 * k, 0.2 + 0.15 * k);
  return out;
}

TEST(ValidatePair, Examples) {
  const std::vector<cplx> samples{cplx(0, 1), cplx(1, 2)};
  EXPECT_TRUE(validate_pair(BoundaryParameter::identity_zero(2), samples).valid);
  EXPECT_TRUE(validate_pair(BoundaryParameter::constant(scalar(0.0), scalar(1.0)), samples).valid);
  const ClassReport bad = validate_pair(BoundaryParameter::constant(scalar(1.0), scalar(-I_unit)), samples);
  EXPECT_FALSE(bad.valid);
  // C0 - iC1 = 0 and Im(C1 C0*) = -1, so both conditions fail
  ASSERT_EQ(bad.violations.size(), 2 * samples.size());
  EXPECT_EQ(bad.violations[0].kind, ClassViolation::Kind::NotNonnegative);
  EXPECT_EQ(bad.violations[1].kind, ClassViolation::Kind::NotInvertible);
}

TEST(ValidatePair, DetectsNegativeImaginaryPart) {
  const ClassReport r = validate_pair(BoundaryParameter::constant(scalar(1.0), scalar(-0.5 * I_unit)), {cplx(0, 1)});
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(r.violations.front().kind, ClassViolation::Kind::NotNonnegative);
}

TEST(ValidatePair, RandomConstructionIsValid) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    EXPECT_TRUE(validate_pair(testing::random_valid_pair(rng, 3), {cplx(0, 1), cplx(-2, 0.3)}).valid);
  }
}

TEST(SelfAdjoint, Examples) {
  EXPECT_TRUE(is_selfadjoint_parameter(BoundaryParameter::identity_zero(2)));
  EXPECT_TRUE(is_selfadjoint_parameter(BoundaryParameter::zero_identity(2)));
  const BoundaryParameter dependent = BoundaryParameter::callable(
      [](cplx) { return Matrix(Matrix::Identity(1, 1)); }, [](cplx l) { return scalar(l); }, 1);
  EXPECT_FALSE(is_selfadjoint_parameter(dependent));
}

TEST(MTau, DirichletIsTangent) {
  const Toy toy = toy2();
  for (cplx lambda : lambda_grid()) {
    const MFunctionSample m = m_tau(toy.geom, toy.triplet, BoundaryParameter::identity_zero(1), lambda);
    EXPECT_LT(std::abs(m.value(0, 0) - std::tan(lambda)), 1e-10) << lambda;
  }
}

TEST(MTau, NeumannIsMinusCotangent) {
  const Toy toy = toy2();
  for (cplx lambda : lambda_grid()) {
    const MFunctionSample m = m_tau(toy.geom, toy.triplet, BoundaryParameter::zero_identity(1), lambda);
    EXPECT_LT(std::abs(m.value(0, 0) + 1.0 / std::tan(lambda)), 1e-10) << lambda;
  }
}

TEST(MTau, MinimalThreeByThree) {
  const Toy toy = toy3();
  for (cplx lambda : {cplx(0, 1), cplx(1, 0.5), cplx(-3, 2)}) {
    const MFunctionSample m = m_tau(toy.geom, toy.triplet, BoundaryParameter::identity_zero(2), lambda);
    ASSERT_EQ(m.value.rows(), 2);
    EXPECT_LT(std::abs(m.value(0, 0) - std::tan(lambda)), 1e-10) << lambda;
    EXPECT_LT(std::abs(m.value(1, 1) + 0.5 / std::tan(0.5 * lambda)), 1e-10) << lambda;
  }
}

TEST(MTau, ShapeMismatch) {
  const Toy toy = toy2();
  try {
    m_tau(toy.geom, toy.triplet, BoundaryParameter::identity_zero(2), cplx(0, 1));
    FAIL() << "expected ShapeMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

TEST(MTau, EquivalentRepresentativesAgree) {
  const Toy toy = toy3();
  std::mt19937_64 rng(23);
  const BoundaryParameter p = testing::random_valid_pair(rng, 2);
  const Matrix X = testing::random_matrix(rng, 2, 2) + 3.0 * Matrix::Identity(2, 2);
  const cplx lambda(0.7, 0.9);
  const Matrix m1 = m_tau(toy.geom, toy.triplet, p, lambda).value;
  const Matrix m2 = m_tau(toy.geom, toy.triplet, p.transformed(X), lambda).value;
  EXPECT_LT(max_abs(m1 - m2), 1e-10);
}

TEST(VTau, AgreesWithBlockFormula) {
  std::mt19937_64 rng(29);
  for (const Toy& toy : {toy2(), toy3()}) {
    const Eigen::Index d = toy.geom.dim_dot();
    const std::vector<BoundaryParameter> params{BoundaryParameter::identity_zero(d),
                                                BoundaryParameter::zero_identity(d),
                                                testing::random_valid_pair(rng, d)};
    for (const BoundaryParameter& p : params) {
      for (cplx lambda : lambda_grid()) {
        const VTauSolution v = v_tau_bvp(toy.geom, toy.triplet, p, lambda);
        const MFunctionSample m = m_tau(toy.geom, toy.triplet, p, lambda);
        EXPECT_LT(max_abs(v.m.value - m.value), 1e-8) << lambda;
        EXPECT_LT(v.residual, 1e-8);
      }
    }
  }
}

TEST(VTau, NeumannValue) {
  const Toy toy = toy2();
  const VTauSolution v = v_tau_bvp(toy.geom, toy.triplet, BoundaryParameter::zero_identity(1), cplx(0, 1));
  EXPECT_LT(std::abs(v.m.value(0, 0) + 1.0 / std::tan(cplx(0, 1))), 1e-10);
}

TEST(Herglotz, TangentSamples) {
  std::vector<MFunctionSample> samples;
  for (cplx lambda : lambda_grid()) samples.push_back({lambda, scalar(std::tan(lambda))});
  EXPECT_LE(herglotz_defect(samples), 1e-9);
}

TEST(Herglotz, NegativeImaginaryPartIsReported) {
  EXPECT_NEAR(herglotz_defect({{cplx(0, 1), scalar(cplx(0, -0.25))}}), 0.25, 1e-15);
}

TEST(Inequality, SelfAdjointEquality) {
  const Toy toy = toy2();
  EXPECT_LE(std::abs(inequality_defect(toy.geom, toy.triplet, BoundaryParameter::zero_identity(1), cplx(0, 1))), 1e-6);
  EXPECT_LE(std::abs(inequality_defect(toy.geom, toy.triplet, BoundaryParameter::identity_zero(1), cplx(0, 2))), 1e-6);
}

TEST(Inequality, RandomValidPair) {
  std::mt19937_64 rng(31);
  const Toy toy = toy3();
  for (int trial = 0; trial < 5; ++trial) {
    const BoundaryParameter p = testing::random_valid_pair(rng, 2);
    EXPECT_GE(inequality_defect(toy.geom, toy.triplet, p, cplx(0.3 * trial, 1.0)), -1e-8);
  }
}

TEST(Admissibility, NeumannIsAdmissible) {
  const Toy toy = toy2();
  const AdmissibilityReport r = check_admissible(toy.geom, toy.triplet, BoundaryParameter::zero_identity(1));
  EXPECT_TRUE(r.admissible);
  EXPECT_TRUE(r.first.tends_to_zero);
  EXPECT_TRUE(r.second.tends_to_zero);
  EXPECT_TRUE(r.singular_at.empty());
  EXPECT_NEAR(r.first.slope, -1.0, 0.05);
}

TEST(Admissibility, DirichletFirstExpressionVanishes) {
  const Toy toy = toy2();
  const AdmissibilityReport r = check_admissible(toy.geom, toy.triplet, BoundaryParameter::identity_zero(1));
  EXPECT_TRUE(r.admissible);
  EXPECT_TRUE(r.first.identically_zero);
  EXPECT_NEAR(r.second.slope, -1.0, 0.05);
}

TEST(Admissibility, UniversalFailsForToy2) {
  const Toy toy = toy2();
  const UniversalAdmissibilityReport r = universal_admissibility(toy.geom, toy.triplet);
  EXPECT_FALSE(r.universal);
  EXPECT_FALSE(r.limit.tends_to_zero);
  // ‖Ṁ₊(iy)‖ = tanh y → 1
  EXPECT_NEAR(r.limit.norms.back(), 1.0, 1e-9);
  EXPECT_EQ(r.directions.size(), r.growth.size());
  EXPECT_EQ(r.growth_slopes.size(), r.directions.size());
}

TEST(Admissibility, ConsistentWithRandomPairs) {
  // If every parameter were admissible the verdicts on random pairs would all
  // be positive; a failing universal probe is compatible with mixed verdicts,
  // while each individual verdict must agree with its own decay data.
  const Toy toy = toy2();
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 4; ++trial) {
    const AdmissibilityReport r = check_admissible(toy.geom, toy.triplet, testing::random_valid_pair(rng, 1));
    EXPECT_EQ(r.admissible, r.singular_at.empty() && r.first.tends_to_zero && r.second.tends_to_zero);
  }
}

}  // namespace
}  // namespace specfun
