#include "specfun/nevanlinna.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <random>

#include "specfun/linalg.hpp"

namespace specfun {
namespace {

double smallest_singular_value(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

bool invertible(const Matrix& m, double tol) {
  if (m.size() == 0) return true;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) > tol * std::max(1.0, sv(0));
}

void check_shapes(const TripletMaps& triplet, const Matrix& C0, const Matrix& C1) {
  const Eigen::Index dd = triplet.dim_h1 + triplet.dim_hat + triplet.dim_b;
  if (C0.rows() != dd || C0.cols() != dd || C1.rows() != dd || C1.cols() != dd) {
    throw Error(ErrorCode::ShapeMismatch,
                "boundary parameter must be " + std::to_string(dd) + "x" + std::to_string(dd));
  }
}

DecayFit fit_decay(const std::vector<double>& y, std::vector<double> norms,
                   const AdmissibilityOptions& opts) {
  DecayFit fit;
  fit.norms = std::move(norms);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double v = fit.norms[i];
    if (!std::isfinite(v) || v <= opts.zero_floor) continue;
    const double lx = std::log(y[i]);
    const double ly = std::log(v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count == 0) {
    fit.identically_zero = true;
    fit.tends_to_zero = true;
    return fit;
  }
  if (count >= 2) {
    const double denom = count * sxx - sx * sx;
    fit.slope = denom > 0.0 ? (count * sxy - sx * sy) / denom : 0.0;
  }
  const double top = fit.norms.back();
  fit.tends_to_zero = std::isfinite(top) && top < opts.top_threshold && count >= 2 &&
                      fit.slope < opts.slope_threshold;
  return fit;
}

Matrix compressed_signature(const BoundaryGeometry& geom) {
  const auto& h0 = geom.index.h0;
  const auto d0 = static_cast<Eigen::Index>(h0.size());
  Matrix J0(d0, d0);
  for (Eigen::Index r = 0; r < d0; ++r) {
    for (Eigen::Index c = 0; c < d0; ++c) J0(r, c) = geom.sys.J()(h0[r], h0[c]);
  }
  return J0;
}

}  // namespace

BoundaryParameter BoundaryParameter::constant(Matrix C0, Matrix C1) {
  if (C0.rows() != C0.cols() || C1.rows() != C1.cols() || C0.rows() != C1.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "C0 and C1 must be square of equal size");
  }
  BoundaryParameter p;
  p.dim_ = C0.rows();
  p.constant_ = true;
  p.c0_ = [C0 = std::move(C0)](cplx) { return C0; };
  p.c1_ = [C1 = std::move(C1)](cplx) { return C1; };
  return p;
}

BoundaryParameter BoundaryParameter::callable(Function C0, Function C1, Eigen::Index dim) {
  BoundaryParameter p;
  p.dim_ = dim;
  p.constant_ = false;
  p.c0_ = std::move(C0);
  p.c1_ = std::move(C1);
  return p;
}

BoundaryParameter BoundaryParameter::identity_zero(Eigen::Index dim) {
  return constant(Matrix::Identity(dim, dim), Matrix::Zero(dim, dim));
}

BoundaryParameter BoundaryParameter::zero_identity(Eigen::Index dim) {
  return constant(Matrix::Zero(dim, dim), Matrix::Identity(dim, dim));
}

Matrix BoundaryParameter::C0(cplx lambda) const { return c0_(lambda); }
Matrix BoundaryParameter::C1(cplx lambda) const { return c1_(lambda); }

BoundaryParameter BoundaryParameter::transformed(const Matrix& X) const {
  BoundaryParameter p = *this;
  p.c0_ = [f = c0_, X](cplx l) { return Matrix(X * f(l)); };
  p.c1_ = [f = c1_, X](cplx l) { return Matrix(X * f(l)); };
  return p;
}

ClassReport validate_pair(const BoundaryParameter& param, const std::vector<cplx>& lambda_samples,
                          double tol) {
  ClassReport report;
  for (cplx lambda : lambda_samples) {
    const Matrix C0 = param.C0(lambda);
    const Matrix C1 = param.C1(lambda);
    const double floor = C0.size() == 0 ? 0.0 : linalg::min_eigenvalue(2.0 * linalg::imag_part(C1 * C0.adjoint()));
    if (floor < -tol) {
      report.violations.push_back({lambda, ClassViolation::Kind::NotNonnegative, floor});
    }
    const Matrix T = C0 - I_unit * C1;
    if (!invertible(T, tol)) {
      report.violations.push_back(
          {lambda, ClassViolation::Kind::NotInvertible, smallest_singular_value(T)});
    }
  }
  report.valid = report.violations.empty();
  return report;
}

bool is_selfadjoint_parameter(const BoundaryParameter& param, double tol) {
  if (!param.is_constant()) return false;
  const Matrix C0 = param.C0(I_unit);
  const Matrix C1 = param.C1(I_unit);
  if (C0.size() == 0) return true;
  if (linalg::spectral_norm(linalg::imag_part(C1 * C0.adjoint())) > tol) return false;
  return invertible(C0 + I_unit * C1, tol) && invertible(C0 - I_unit * C1, tol);
}

MFunctionSample m_tau(const WeylData& weyl, const BoundaryParameter& param) {
  const Matrix C0 = param.C0(weyl.lambda);
  const Matrix C1 = param.C1(weyl.lambda);
  if (C0.rows() != weyl.M_dot.rows() || C0.cols() != weyl.M_dot.cols() || C1.rows() != C0.rows() ||
      C1.cols() != weyl.M_dot.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "boundary parameter does not match the geometry");
  }
  MFunctionSample out{weyl.lambda, weyl.m0};
  if (C0.size() == 0) return out;
  const Matrix T = C0 - C1 * weyl.M_dot;
  if (!invertible(T, 1e-13)) {
    throw Error(ErrorCode::SingularTransform, "C0 - C1 M_dot is singular");
  }
  out.value += weyl.S1 * T.fullPivLu().solve(C1 * weyl.S2);
  return out;
}

MFunctionSample m_tau(const BoundaryGeometry& geom, const TripletMaps& triplet,
                      const BoundaryParameter& param, cplx lambda, const SolveOptions& opts) {
  if (!(lambda.imag() > 0.0)) throw Error(ErrorCode::NearRealAxis, "m_tau needs Im lambda > 0");
  return m_tau(weyl_function(geom, triplet, lambda, opts), param);
}

Matrix boundary_conditions(const BoundaryGeometry& geom, const TripletMaps& triplet,
                           const Matrix& C0, const Matrix& C1) {
  check_shapes(triplet, C0, C1);
  const Eigen::Index n = geom.sys.n();
  const int k = triplet.dim_h1perp;
  Matrix conditions = Matrix::Zero(n, 2 * n);
  for (int r = 0; r < k; ++r) conditions(r, geom.index.a1_h1perp[r]) = 1.0;
  conditions.bottomRows(n - k) = C0 * triplet.G0_dot - C1 * triplet.G1_dot;
  return conditions;
}

Matrix phi_matrix(const TripletMaps& triplet, const Matrix& C0, const Matrix& C1) {
  const int k = triplet.dim_h1perp, h1 = triplet.dim_h1, nh = triplet.dim_hat;
  const Eigen::Index dd = C0.rows();
  Matrix phi = Matrix::Zero(dd, k + h1 + nh + h1);
  phi.middleCols(k, h1) = C0.leftCols(h1);
  phi.middleCols(k + h1, nh) = C0.middleCols(h1, nh) + 0.5 * I_unit * C1.middleCols(h1, nh);
  phi.middleCols(k + h1 + nh, h1) = -C1.leftCols(h1);
  return phi;
}

VTauSolution v_tau_bvp(const BoundaryGeometry& geom, const TripletMaps& triplet,
                       const BoundaryParameter& param, cplx lambda, const SolveOptions& opts) {
  if (!(lambda.imag() > opts.min_imag)) {
    throw Error(ErrorCode::NearRealAxis, "v_tau needs Im lambda > 0");
  }
  const Matrix C0 = param.C0(lambda);
  const Matrix C1 = param.C1(lambda);
  check_shapes(triplet, C0, C1);
  const Eigen::Index n = geom.sys.n();
  const int k = triplet.dim_h1perp;
  const Eigen::Index d0 = geom.dim_h0();

  const Matrix conditions = boundary_conditions(geom, triplet, C0, C1);

  Matrix rhs = Matrix::Zero(n, d0);
  rhs.topLeftCorner(k, k) = -Matrix::Identity(k, k);
  rhs.bottomRows(n - k) = phi_matrix(triplet, C0, C1);

  const GraphFrame graph = solution_graph(geom.sys, lambda, opts.propagation);
  const Matrix W = boundary_data(geom, graph.P, graph.Q);
  const Matrix A = conditions * W;
  if (!invertible(A, 1e-14)) throw Error(ErrorCode::SingularBVP, "v_tau boundary system is singular");
  const Matrix X = A.fullPivLu().solve(rhs);

  VTauSolution sol;
  sol.lambda = lambda;
  sol.initial = graph.P * X;
  sol.boundary = W * X;
  sol.residual = (conditions * sol.boundary - rhs).cwiseAbs().maxCoeff();
  Matrix m(d0, d0);
  for (Eigen::Index r = 0; r < d0; ++r) m.row(r) = sol.boundary.row(geom.index.h0[r]);
  sol.m = {lambda, m + 0.5 * compressed_signature(geom)};
  return sol;
}

std::vector<double> default_y_grid() { return {1e1, 1e2, 1e3, 1e4, 1e5, 1e6}; }

AdmissibilityReport check_admissible(const BoundaryGeometry& geom, const TripletMaps& triplet,
                                     const BoundaryParameter& param,
                                     const std::vector<double>& y_grid,
                                     const AdmissibilityOptions& opts, const SolveOptions& solve) {
  AdmissibilityReport report;
  report.y = y_grid;
  std::vector<double> first, second;
  for (double y : y_grid) {
    const cplx lambda{0.0, y};
    const WeylData w = weyl_function(geom, triplet, lambda, solve);
    const Matrix C0 = param.C0(lambda);
    const Matrix C1 = param.C1(lambda);
    check_shapes(triplet, C0, C1);
    const Matrix T = C0 - C1 * w.M_dot;
    if (!invertible(T, 1e-13)) {
      report.singular_at.push_back(y);
      first.push_back(std::numeric_limits<double>::quiet_NaN());
      second.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const auto lu = T.fullPivLu();
    first.push_back(linalg::spectral_norm(lu.solve(C1)) / y);
    second.push_back(linalg::spectral_norm(w.M_dot * lu.solve(C0)) / y);
  }
  report.first = fit_decay(y_grid, std::move(first), opts);
  report.second = fit_decay(y_grid, std::move(second), opts);
  report.admissible = report.singular_at.empty() && report.first.tends_to_zero &&
                      report.second.tends_to_zero;
  return report;
}

UniversalAdmissibilityReport universal_admissibility(const BoundaryGeometry& geom,
                                                     const TripletMaps& triplet,
                                                     const std::vector<double>& y_grid,
                                                     const AdmissibilityOptions& opts,
                                                     const SolveOptions& solve) {
  UniversalAdmissibilityReport report;
  report.y = y_grid;
  const Eigen::Index dd = geom.dim_dot();
  for (Eigen::Index i = 0; i < dd; ++i) report.directions.push_back(Vector::Unit(dd, i));
  if (dd > 1) {
    report.directions.push_back(Vector::Ones(dd).normalized());
    std::mt19937_64 rng(20240917);
    std::normal_distribution<double> normal;
    for (int r = 0; r < 2; ++r) {
      Vector h(dd);
      for (Eigen::Index i = 0; i < dd; ++i) h(i) = cplx(normal(rng), normal(rng));
      report.directions.push_back(h.normalized());
    }
  }
  report.growth.assign(report.directions.size(), {});

  std::vector<double> limit_norms;
  for (double y : y_grid) {
    const WeylData w = weyl_function(geom, triplet, cplx(0.0, y), solve);
    limit_norms.push_back(linalg::spectral_norm(w.M_dot));
    for (std::size_t d = 0; d < report.directions.size(); ++d) {
      const Vector& h = report.directions[d];
      report.growth[d].push_back(y * h.dot(w.M_dot * h).imag());
    }
  }
  report.limit = fit_decay(y_grid, std::move(limit_norms), opts);

  report.diverges = !report.directions.empty();
  for (const auto& g : report.growth) {
    AdmissibilityOptions growth_opts = opts;
    growth_opts.zero_floor = 0.0;
    const DecayFit fit = fit_decay(y_grid, g, growth_opts);
    report.growth_slopes.push_back(fit.slope);
    const bool positive = std::all_of(g.begin(), g.end(), [](double v) { return v > 0.0; });
    if (!positive || fit.slope < 0.5) report.diverges = false;
  }
  report.universal = report.limit.tends_to_zero && report.diverges;
  return report;
}

double herglotz_defect(const std::vector<MFunctionSample>& samples) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    if (s.value.size() == 0) continue;
    worst = std::max(worst, -linalg::min_eigenvalue(linalg::imag_part(s.value)));
  }
  return samples.empty() ? 0.0 : worst;
}

double inequality_defect(const BoundaryGeometry& geom, const TripletMaps& triplet,
                         const BoundaryParameter& param, cplx lambda, const SolveOptions& opts) {
  const VTauSolution v = v_tau_bvp(geom, triplet, param, lambda, opts);
  const Propagator prop(geom.sys, lambda, opts.propagation);
  const CompositeQuadrature q = prop.quadrature();
  std::vector<Matrix> frames = prop.sample(q.nodes);
  for (auto& f : frames) f = f * v.initial;
  const Matrix energy = weighted_gram(geom.sys, q, frames, frames);
  return linalg::min_eigenvalue(linalg::imag_part(v.m.value) - lambda.imag() * linalg::hermitian_part(energy));
}

}  // namespace specfun
