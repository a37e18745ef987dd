#include "specfun/weyl.hpp"

#include <array>
#include <cmath>

namespace specfun {
namespace {

Matrix rows_of(const Matrix& m, const std::vector<int>& rows, Eigen::Index offset = 0) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i] + offset);
  return out;
}

std::array<int, 4> block_sizes(const FundamentalSolutions& s) {
  return {s.dim_h1perp, s.dim_h1, s.dim_hat, s.dim_b};
}

std::array<int, 4> block_offsets(const std::array<int, 4>& sizes) {
  return {0, sizes[0], sizes[0] + sizes[1], sizes[0] + sizes[1] + sizes[2]};
}

void check_off_axis(cplx lambda, double min_imag) {
  if (std::abs(lambda.imag()) < min_imag) {
    throw Error(ErrorCode::NearRealAxis, "|Im lambda| below " + std::to_string(min_imag));
  }
}

}  // namespace

FundamentalSolutions solve_fundamental(const BoundaryGeometry& geom, const TripletMaps& triplet,
                                       cplx lambda, const SolveOptions& opts) {
  check_off_axis(lambda, opts.min_imag);
  const Eigen::Index n = geom.sys.n();
  const GraphFrame graph = solution_graph(geom.sys, lambda, opts.propagation);
  // Boundary data of the solution with initial value P x is W x.
  const Matrix W = boundary_data(geom, graph.P, graph.Q);
  const Matrix A = triplet.G0 * W;
  Eigen::JacobiSVD<Matrix> svd(A);
  const auto& sv = svd.singularValues();
  const double smallest = sv(n - 1);
  if (!(smallest > 1e-14 * std::max(1.0, sv(0)))) {
    throw Error(ErrorCode::SingularBVP, "boundary matrix is singular at this lambda");
  }
  const Matrix X = A.fullPivLu().solve(Matrix::Identity(n, n));
  FundamentalSolutions s;
  s.lambda = lambda;
  s.initial = graph.P * X;
  s.boundary = W * X;
  s.dim_h1perp = triplet.dim_h1perp;
  s.dim_h1 = triplet.dim_h1;
  s.dim_hat = triplet.dim_hat;
  s.dim_b = triplet.dim_b;
  s.condition = sv(0) / smallest;
  s.ill_conditioned = s.condition > opts.warn_condition;
  return s;
}

WeylData weyl_function(const BoundaryGeometry& geom, const TripletMaps& triplet, cplx lambda,
                       const SolveOptions& opts) {
  WeylData w;
  w.lambda = lambda;
  w.solutions = solve_fundamental(geom, triplet, lambda, opts);
  const FundamentalSolutions& s = w.solutions;
  const Eigen::Index n = geom.sys.n();
  const BlockIndex& idx = geom.index;
  const auto sizes = block_sizes(s);
  const auto off = block_offsets(sizes);

  // Rows: Γ⁰₀ₐ¹, Γ⁰₀ₐ², Γ̂ₐ applied to Ũ⁻¹y(a); -Γ₁b applied to y(b).
  w.M_plus = Matrix::Zero(n, n);
  w.M_plus.middleRows(off[0], sizes[0]) = rows_of(s.boundary, idx.a0_h1perp);
  w.M_plus.middleRows(off[1], sizes[1]) = rows_of(s.boundary, idx.a0_h1);
  w.M_plus.middleRows(off[2], sizes[2]) = rows_of(s.boundary, idx.hat);
  w.M_plus.middleRows(off[3], sizes[3]) = -rows_of(s.boundary, idx.b1, n);
  // M₃₃ = Γ̂ₐξ₃ + (i/2) I
  w.M_plus.block(off[2], off[2], sizes[2], sizes[2]) +=
      0.5 * I_unit * Matrix::Identity(sizes[2], sizes[2]);

  auto blk = [&](int r, int c) { return weyl_block(w, r, c); };
  const int k = sizes[0], h1 = sizes[1], nh = sizes[2], nb = sizes[3];
  const int d0 = k + h1 + nh + h1;
  const int dd = h1 + nh + nb;
  const Matrix Ih1 = Matrix::Identity(h1, h1);
  const Matrix Ihat = Matrix::Identity(nh, nh);

  // m₀ over H₁⊥ ⊕ H₁ ⊕ Ĥ ⊕ H₁
  w.m0 = Matrix::Zero(d0, d0);
  const std::array<int, 4> m0_off{0, k, k + h1, k + h1 + nh};
  const std::array<int, 4> m0_size{k, h1, nh, h1};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) w.m0.block(m0_off[r], m0_off[c], m0_size[r], m0_size[c]) = blk(r, c);
  }
  w.m0.block(m0_off[1], m0_off[3], h1, h1) = -0.5 * Ih1;
  w.m0.block(m0_off[3], m0_off[1], h1, h1) = -0.5 * Ih1;

  // ℋ̇ = H₁ ⊕ Ĥ ⊕ H
  const std::array<int, 3> dot_off{0, h1, h1 + nh};
  const std::array<int, 3> dot_size{h1, nh, nb};

  w.S1 = Matrix::Zero(d0, dd);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) w.S1.block(m0_off[r], dot_off[c], m0_size[r], dot_size[c]) = blk(r, c + 1);
  }
  w.S1.block(m0_off[2], dot_off[1], nh, nh) -= 0.5 * I_unit * Ihat;
  w.S1.block(m0_off[3], dot_off[0], h1, h1) = -Ih1;

  w.S2 = Matrix::Zero(dd, d0);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) w.S2.block(dot_off[r], m0_off[c], dot_size[r], m0_size[c]) = blk(r + 1, c);
  }
  w.S2.block(dot_off[1], m0_off[2], nh, nh) += 0.5 * I_unit * Ihat;
  w.S2.block(dot_off[0], m0_off[3], h1, h1) = -Ih1;

  w.M_dot = Matrix::Zero(dd, dd);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) w.M_dot.block(dot_off[r], dot_off[c], dot_size[r], dot_size[c]) = blk(r + 1, c + 1);
  }

  w.J0 = Matrix(d0, d0);
  for (int r = 0; r < d0; ++r) {
    for (int c = 0; c < d0; ++c) w.J0(r, c) = geom.sys.J()(idx.h0[r], idx.h0[c]);
  }
  return w;
}

Matrix weyl_block(const WeylData& w, int row, int col) {
  const auto sizes = block_sizes(w.solutions);
  const auto off = block_offsets(sizes);
  return w.M_plus.block(off[row], off[col], sizes[row], sizes[col]);
}

double conjugate_identity_defect(const BoundaryGeometry& geom, const TripletMaps& triplet,
                                 cplx lambda_minus, const SolveOptions& opts) {
  if (!(lambda_minus.imag() < 0.0)) {
    throw Error(ErrorCode::NearRealAxis, "conjugate identities need Im lambda < 0");
  }
  const FundamentalSolutions lower = solve_fundamental(geom, triplet, lambda_minus, opts);
  const WeylData upper = weyl_function(geom, triplet, std::conj(lambda_minus), opts);
  const BlockIndex& idx = geom.index;
  const auto sizes = block_sizes(lower);
  const auto off = block_offsets(sizes);
  auto column_block = [&](int j) { return lower.boundary.middleCols(off[j], sizes[j]); };
  // Γ⁰₀ₐ¹, Γ⁰₀ₐ² and Γ̂ₐ applied to the lower-half-plane solutions.
  auto gamma0 = [&](int k, int j) {
    return rows_of(column_block(j), k == 0 ? idx.a0_h1perp : idx.a0_h1);
  };
  auto gamma_hat = [&](int j) { return rows_of(column_block(j), idx.hat); };

  double worst = 0.0;
  auto compare = [&](const Matrix& lhs, const Matrix& rhs) {
    if (lhs.size() == 0) return;
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  };
  // M*_jk(λ̄) = Γᵏ₀ₐ ξ_j(λ), k ∈ {1,2}, j ∈ {1,2,3}; M*_4k(λ̄) = Γᵏ₀ₐ u₋(λ)
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < 4; ++j) compare(weyl_block(upper, j, k).adjoint(), gamma0(k, j));
  }
  // M*_j3(λ̄) = Γ̂ₐ ξ_j(λ), j ∈ {1,2}; M*_33(λ̄) = Γ̂ₐ ξ₃(λ) + (i/2)I; M*_43(λ̄) = Γ̂ₐ u₋(λ)
  for (int j = 0; j < 4; ++j) {
    Matrix rhs = gamma_hat(j);
    if (j == 2) rhs += 0.5 * I_unit * Matrix::Identity(sizes[2], sizes[2]);
    compare(weyl_block(upper, j, 2).adjoint(), rhs);
  }
  return worst;
}

}  // namespace specfun
