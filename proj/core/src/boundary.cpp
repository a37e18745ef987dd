#include "specfun/boundary.hpp"

#include <cmath>
#include <numeric>

namespace specfun {
namespace {

std::vector<int> range(int begin, int end) {
  std::vector<int> out(static_cast<std::size_t>(std::max(0, end - begin)));
  std::iota(out.begin(), out.end(), begin);
  return out;
}

// Splits X·frame of a neutral subspace into the orthonormal domain basis D of
// the isometry V (inside H ⊕ Ĥ) and its image V·D (inside H).
struct IsometryData {
  Matrix domain;
  Matrix image;
};

IsometryData isometry_of(const Dimensions& dims, const Matrix& frame) {
  const int top_rows = dims.nu + dims.nu_hat;
  const Matrix x = build_X(dims) * frame;
  const Matrix top = x.topRows(top_rows);
  const Matrix bottom = x.bottomRows(dims.nu);
  const Eigen::Index k = frame.cols();
  if (k == 0) return {Matrix::Zero(top_rows, 0), Matrix::Zero(dims.nu, 0)};
  Eigen::HouseholderQR<Matrix> qr(top);
  const Matrix q = qr.householderQ() * Matrix::Identity(top_rows, k);
  const Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  // V D = bottom R⁻¹
  const Matrix image = r.transpose().triangularView<Eigen::Lower>().solve(bottom.transpose()).transpose();
  return {q, image};
}

// Unitary factor of the polar decomposition of m.
Matrix polar_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Unitary W with W·from = to, where both have orthonormal columns.  On the
// complements W is the unitary closest to the identity.
Matrix matching_unitary(const Matrix& from, const Matrix& to) {
  const Eigen::Index m = from.rows();
  const Eigen::Index k = from.cols();
  const Matrix from_perp = linalg::orthogonal_complement(from);
  Matrix to_perp = linalg::orthogonal_complement(to);
  if (m > k) to_perp = to_perp * polar_unitary(to_perp.adjoint() * from_perp);
  Matrix f(m, m), t(m, m);
  f << from, from_perp;
  t << to, to_perp;
  return t * f.adjoint();
}

}  // namespace

Subspace j_companion(const SymmetricSystem& sys, const Subspace& tau) {
  const Matrix jt = sys.J() * tau.frame();
  return Subspace::from_orthonormal(linalg::orthogonal_complement(jt));
}

bool is_neutral(const SymmetricSystem& sys, const Subspace& eta, double tol) {
  if (eta.dim() == 0) return true;
  return (eta.frame().adjoint() * sys.J() * eta.frame()).norm() <= tol;
}

Matrix build_X(const Dimensions& dims) {
  check_dimensions(dims);
  const int nu = dims.nu;
  const int nh = dims.nu_hat;
  const double r = 1.0 / std::sqrt(2.0);
  Matrix X = Matrix::Zero(dims.n(), dims.n());
  const Matrix id = Matrix::Identity(nu, nu);
  X.block(0, 0, nu, nu) = -I_unit * r * id;
  X.block(0, nu + nh, nu, nu) = r * id;
  X.block(nu, nu, nh, nh) = Matrix::Identity(nh, nh);
  X.block(nu + nh, 0, nu, nu) = I_unit * r * id;
  X.block(nu + nh, nu + nh, nu, nu) = r * id;
  return X;
}

Matrix build_J_hat(const Dimensions& dims) {
  check_dimensions(dims);
  Matrix jh = Matrix::Zero(dims.n(), dims.n());
  for (int i = 0; i < dims.nu + dims.nu_hat; ++i) jh(i, i) = I_unit;
  for (int i = dims.nu + dims.nu_hat; i < dims.n(); ++i) jh(i, i) = -I_unit;
  return jh;
}

Subspace complete_tau(const SymmetricSystem& sys, const Subspace& eta, double tol) {
  if (!is_neutral(sys, eta, tol)) {
    throw Error(ErrorCode::EtaNotNeutral, "eta is not a neutral subspace");
  }
  const Dimensions& dims = sys.dims();
  const int nu = dims.nu;
  const int top_rows = nu + dims.nu_hat;
  const IsometryData v = isometry_of(dims, eta.frame());
  const Eigen::Index j = v.domain.cols();
  const Eigen::Index extra = nu - j;
  // U = -V_η on dom V_η, extended isometrically so that ran U = H.
  Matrix graph(dims.n(), nu);
  graph.topLeftCorner(top_rows, j) = v.domain;
  graph.bottomLeftCorner(nu, j) = -v.image;
  if (extra > 0) {
    graph.topRightCorner(top_rows, extra) = linalg::orthogonal_complement(v.domain).leftCols(extra);
    graph.bottomRightCorner(nu, extra) = linalg::orthogonal_complement(v.image).leftCols(extra);
  }
  const Subspace tau0(build_X(dims).adjoint() * graph);
  return j_companion(sys, tau0);
}

BoundaryGeometry build_geometry(const SymmetricSystem& sys, const Subspace& tau,
                                const GeometryOptions& opts) {
  const Dimensions& dims = sys.dims();
  const int n = dims.n();
  const int nu = dims.nu;
  const int nh = dims.nu_hat;
  if (tau.ambient() != n) {
    throw Error(ErrorCode::ShapeMismatch, "tau must live in C^" + std::to_string(n));
  }
  const Subspace companion = j_companion(sys, tau);
  if (!is_neutral(sys, companion, opts.tol)) {
    throw Error(ErrorCode::TauNotAdmissible, "the J-companion of tau is not neutral");
  }
  const int k = static_cast<int>(companion.dim());
  if (k > nu) {
    throw Error(ErrorCode::TauNotAdmissible, "dim tau is below nu + nu_hat");
  }
  if (opts.check_tau_definite && !tau_definite(sys, tau, opts.probe_lambda)) {
    throw Error(ErrorCode::NotTauDefinite, "a nonzero null-manifold solution starts in tau");
  }

  BoundaryGeometry geom{sys, tau, companion, Matrix(), Matrix(), Matrix(), nu - k, k, BlockIndex{}};
  BlockIndex& idx = geom.index;
  idx.a0_h1perp = range(0, k);
  idx.a0_h1 = range(k, nu);
  idx.hat = range(nu, nu + nh);
  idx.a1_h1perp = range(nu + nh, nu + nh + k);
  idx.a1_h1 = range(nu + nh + k, n);
  idx.b0 = range(0, nu);
  idx.b1 = range(nu + nh, n);
  for (const auto* part : {&idx.a0_h1perp, &idx.a0_h1, &idx.hat, &idx.a1_h1}) {
    idx.h0.insert(idx.h0.end(), part->begin(), part->end());
  }

  // 𝐇₀⊖ = H₁⊥ ⊕ 0 ⊕ 0 inside the first H slot.
  Matrix h0_companion = Matrix::Zero(n, k);
  for (int i = 0; i < k; ++i) h0_companion(idx.a0_h1perp[i], i) = 1.0;
  const IsometryData v1 = isometry_of(dims, h0_companion);
  IsometryData v2 = isometry_of(dims, companion.frame());
  // Rotate the basis of dom V₂ (and its image alongside) towards dom V₁ so
  // that an already aligned τ yields Ũ = I.
  if (k > 0) {
    const Matrix theta = polar_unitary(v2.domain.adjoint() * v1.domain);
    v2.domain = v2.domain * theta;
    v2.image = v2.image * theta;
  }
  const Matrix u1 = matching_unitary(v1.domain, v2.domain);
  const Matrix u2 = matching_unitary(v1.image, v2.image);
  Matrix u_hat = Matrix::Zero(n, n);
  u_hat.topLeftCorner(nu + nh, nu + nh) = u1;
  u_hat.bottomRightCorner(nu, nu) = u2;
  const Matrix X = build_X(dims);
  geom.U_tilde = X.adjoint() * u_hat * X;
  geom.U_tilde_inv = geom.U_tilde.adjoint();
  geom.U = Matrix(n, static_cast<Eigen::Index>(idx.h0.size()));
  for (std::size_t c = 0; c < idx.h0.size(); ++c) {
    geom.U.col(static_cast<Eigen::Index>(c)) = geom.U_tilde.col(idx.h0[c]);
  }
  return geom;
}

GammaB build_gamma_b(const SymmetricSystem& sys) {
  if (!sys.regular()) throw Error(ErrorCode::SingularEndpoint, "b is not a regular endpoint");
  const Dimensions& dims = sys.dims();
  const int n = dims.n();
  GammaB g;
  g.G0b = Matrix::Zero(dims.nu, n);
  g.Ghat = Matrix::Zero(dims.nu_hat, n);
  g.G1b = Matrix::Zero(dims.nu, n);
  for (int i = 0; i < dims.nu; ++i) {
    g.G0b(i, i) = 1.0;
    g.G1b(i, dims.nu + dims.nu_hat + i) = 1.0;
  }
  for (int i = 0; i < dims.nu_hat; ++i) g.Ghat(i, dims.nu + i) = 1.0;
  return g;
}

TripletMaps build_triplet(const BoundaryGeometry& geom) {
  const SymmetricSystem& sys = geom.sys;
  const int n = sys.n();
  const int nu = sys.dims().nu;
  const int nh = sys.dims().nu_hat;
  const BlockIndex& idx = geom.index;
  TripletMaps t;
  t.gamma_b = build_gamma_b(sys);
  t.dim_h1perp = geom.h1perp_dim;
  t.dim_h1 = geom.h1_dim;
  t.dim_hat = nh;
  t.dim_b = nu;
  t.G0 = Matrix::Zero(n, 2 * n);
  t.G1 = Matrix::Zero(n, 2 * n);
  int row = 0;
  for (int i : idx.a1_h1perp) t.G0(row++, i) = -1.0;
  for (int i : idx.a1_h1) t.G0(row++, i) = -1.0;
  for (int i : idx.hat) {
    t.G0(row, i) = I_unit;
    t.G0(row, n + i) = -I_unit;
    ++row;
  }
  for (int i : idx.b0) t.G0(row++, n + i) = 1.0;

  row = 0;
  for (int i : idx.a0_h1perp) t.G1(row++, i) = 1.0;
  for (int i : idx.a0_h1) t.G1(row++, i) = 1.0;
  for (int i : idx.hat) {
    t.G1(row, i) = 0.5;
    t.G1(row, n + i) = 0.5;
    ++row;
  }
  for (int i : idx.b1) t.G1(row++, n + i) = -1.0;

  const int k = geom.h1perp_dim;
  t.G0_dot = t.G0.bottomRows(n - k);
  t.G1_dot = t.G1.bottomRows(n - k);
  return t;
}

Matrix boundary_data(const BoundaryGeometry& geom, const Matrix& c, const Matrix& yb) {
  const Eigen::Index n = geom.sys.n();
  Matrix w(2 * n, c.cols());
  w.topRows(n) = geom.U_tilde_inv * c;
  w.bottomRows(n) = yb;
  return w;
}

double green_identity_residual(const BoundaryGeometry& geom, const TripletMaps& triplet,
                               const Vector& w_y, const Vector& w_z) {
  const Eigen::Index n = geom.sys.n();
  const Matrix& J = geom.sys.J();
  const Vector ya = geom.U_tilde * w_y.head(n);
  const Vector za = geom.U_tilde * w_z.head(n);
  const Vector yb = w_y.tail(n);
  const Vector zb = w_z.tail(n);
  // (x, z) = z* x
  const cplx lagrange = zb.dot(J * yb) - za.dot(J * ya);
  const Vector g0y = triplet.G0 * w_y, g1y = triplet.G1 * w_y;
  const Vector g0z = triplet.G0 * w_z, g1z = triplet.G1 * w_z;
  const cplx abstract = g0z.dot(g1y) - g1z.dot(g0y);
  return std::abs(lagrange - abstract);
}

}  // namespace specfun
