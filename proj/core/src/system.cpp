#include "specfun/system.hpp"

#include <algorithm>
#include <cmath>

#include "specfun/propagate.hpp"

namespace specfun {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDimensions: return "InvalidDimensions";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::BNotHermitian: return "BNotHermitian";
    case ErrorCode::DeltaNotPSD: return "DeltaNotPSD";
    case ErrorCode::OutOfInterval: return "OutOfInterval";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::EtaNotNeutral: return "EtaNotNeutral";
    case ErrorCode::TauNotAdmissible: return "TauNotAdmissible";
    case ErrorCode::NotTauDefinite: return "NotTauDefinite";
    case ErrorCode::SingularEndpoint: return "SingularEndpoint";
    case ErrorCode::SingularBVP: return "SingularBVP";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NearRealAxis: return "NearRealAxis";
    case ErrorCode::ExtrapolationDiverged: return "ExtrapolationDiverged";
  }
  return "Unknown";
}

void check_dimensions(const Dimensions& dims) {
  if (dims.nu < 1 || dims.nu_hat < 0) {
    throw Error(ErrorCode::InvalidDimensions,
                "need nu >= 1 and nu_hat >= 0, got nu = " + std::to_string(dims.nu) +
                    ", nu_hat = " + std::to_string(dims.nu_hat));
  }
}

Matrix build_signature(const Dimensions& dims) {
  check_dimensions(dims);
  const int nu = dims.nu;
  const int nh = dims.nu_hat;
  Matrix J = Matrix::Zero(dims.n(), dims.n());
  J.block(0, nu + nh, nu, nu) = -Matrix::Identity(nu, nu);
  J.block(nu, nu, nh, nh) = I_unit * Matrix::Identity(nh, nh);
  J.block(nu + nh, 0, nu, nu) = Matrix::Identity(nu, nu);
  return J;
}

const char* coefficient_kind_name(CoefficientKind kind) {
  switch (kind) {
    case CoefficientKind::Constant: return "constant";
    case CoefficientKind::Polynomial: return "polynomial";
    case CoefficientKind::PiecewiseConstant: return "piecewise_constant";
    case CoefficientKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

struct CoefficientField::Data {
  CoefficientKind kind = CoefficientKind::Constant;
  std::vector<double> knots;
  std::vector<Matrix> values;
};

CoefficientField::CoefficientField() : CoefficientField(CoefficientField::constant(Matrix())) {}

CoefficientField::CoefficientField(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

namespace {

void check_square_and_equal(const std::vector<Matrix>& values) {
  if (values.empty()) throw Error(ErrorCode::ShapeMismatch, "coefficient field needs at least one matrix");
  const Eigen::Index n = values.front().rows();
  for (const auto& m : values) {
    if (m.rows() != n || m.cols() != n) {
      throw Error(ErrorCode::ShapeMismatch, "coefficient matrices must be square and of equal size");
    }
  }
}

void check_increasing(const std::vector<double>& knots, const char* what) {
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) {
      throw Error(ErrorCode::ShapeMismatch, std::string(what) + " must be strictly increasing");
    }
  }
}

}  // namespace

CoefficientField CoefficientField::constant(Matrix value) {
  auto d = std::make_shared<Data>();
  d->kind = CoefficientKind::Constant;
  d->values.push_back(std::move(value));
  return CoefficientField(d);
}

CoefficientField CoefficientField::polynomial(std::vector<Matrix> coefficients) {
  check_square_and_equal(coefficients);
  auto d = std::make_shared<Data>();
  d->kind = CoefficientKind::Polynomial;
  d->values = std::move(coefficients);
  return CoefficientField(d);
}

CoefficientField CoefficientField::piecewise_constant(std::vector<double> breakpoints,
                                                      std::vector<Matrix> values) {
  check_square_and_equal(values);
  if (breakpoints.size() != values.size() + 1) {
    throw Error(ErrorCode::ShapeMismatch, "piecewise-constant field needs one more breakpoint than values");
  }
  check_increasing(breakpoints, "breakpoints");
  auto d = std::make_shared<Data>();
  d->kind = CoefficientKind::PiecewiseConstant;
  d->knots = std::move(breakpoints);
  d->values = std::move(values);
  return CoefficientField(d);
}

CoefficientField CoefficientField::tabulated(std::vector<double> nodes, std::vector<Matrix> values) {
  check_square_and_equal(values);
  if (nodes.size() != values.size() || nodes.size() < 2) {
    throw Error(ErrorCode::ShapeMismatch, "tabulated field needs matching node and value lists (>= 2)");
  }
  check_increasing(nodes, "table nodes");
  auto d = std::make_shared<Data>();
  d->kind = CoefficientKind::Tabulated;
  d->knots = std::move(nodes);
  d->values = std::move(values);
  return CoefficientField(d);
}

Matrix CoefficientField::operator()(double t) const {
  const auto& d = *data_;
  switch (d.kind) {
    case CoefficientKind::Constant:
      return d.values.front();
    case CoefficientKind::Polynomial: {
      Matrix acc = d.values.back();
      for (std::size_t k = d.values.size() - 1; k-- > 0;) acc = (acc * t + d.values[k]).eval();
      return acc;
    }
    case CoefficientKind::PiecewiseConstant: {
      auto it = std::upper_bound(d.knots.begin(), d.knots.end(), t);
      auto idx = static_cast<std::ptrdiff_t>(std::distance(d.knots.begin(), it)) - 1;
      idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(d.values.size()) - 1);
      return d.values[static_cast<std::size_t>(idx)];
    }
    case CoefficientKind::Tabulated: {
      if (t <= d.knots.front()) return d.values.front();
      if (t >= d.knots.back()) return d.values.back();
      auto it = std::upper_bound(d.knots.begin(), d.knots.end(), t);
      const auto hi = static_cast<std::size_t>(std::distance(d.knots.begin(), it));
      const std::size_t lo = hi - 1;
      const double w = (t - d.knots[lo]) / (d.knots[hi] - d.knots[lo]);
      return (1.0 - w) * d.values[lo] + w * d.values[hi];
    }
  }
  return d.values.front();
}

CoefficientKind CoefficientField::kind() const { return data_->kind; }

Eigen::Index CoefficientField::dim() const { return data_->values.front().rows(); }

bool CoefficientField::is_constant() const {
  const auto& d = *data_;
  if (d.kind == CoefficientKind::Constant) return true;
  const Matrix& first = d.values.front();
  if (d.kind == CoefficientKind::Polynomial) {
    for (std::size_t k = 1; k < d.values.size(); ++k) {
      if (d.values[k].norm() != 0.0) return false;
    }
    return true;
  }
  for (const auto& v : d.values) {
    if (v != first) return false;
  }
  return true;
}

bool CoefficientField::is_piecewise_constant() const {
  return is_constant() || data_->kind == CoefficientKind::PiecewiseConstant;
}

bool CoefficientField::is_zero() const {
  for (const auto& v : data_->values) {
    if (v.norm() != 0.0) return false;
  }
  return true;
}

std::vector<double> CoefficientField::breakpoints() const {
  const auto& d = *data_;
  if (d.kind == CoefficientKind::PiecewiseConstant || d.kind == CoefficientKind::Tabulated) {
    return d.knots;
  }
  return {};
}

double CoefficientField::norm_bound(double a, double b) const {
  const auto& d = *data_;
  if (d.kind == CoefficientKind::Polynomial) {
    const double r = std::max(std::abs(a), std::abs(b));
    double acc = 0.0;
    double power = 1.0;
    for (const auto& m : d.values) {
      acc += linalg::spectral_norm(m) * power;
      power *= r;
    }
    return acc;
  }
  double best = 0.0;
  for (const auto& m : d.values) best = std::max(best, linalg::spectral_norm(m));
  return best;
}

const std::vector<double>& CoefficientField::knots() const { return data_->knots; }
const std::vector<Matrix>& CoefficientField::data() const { return data_->values; }

SymmetricSystem::SymmetricSystem(Dimensions dims, double a, double b, CoefficientField B,
                                 CoefficientField Delta)
    : dims_(dims), a_(a), b_(b), B_(std::move(B)), Delta_(std::move(Delta)) {
  check_dimensions(dims_);
  if (!std::isfinite(a_) || !std::isfinite(b_) || !(a_ < b_)) {
    throw Error(ErrorCode::InvalidInterval, "interval must be finite with a < b");
  }
  if (B_.dim() != dims_.n() || Delta_.dim() != dims_.n()) {
    throw Error(ErrorCode::ShapeMismatch, "coefficients must be " + std::to_string(dims_.n()) + "x" +
                                              std::to_string(dims_.n()));
  }
  J_ = build_signature(dims_);
}

Matrix SymmetricSystem::generator(double t, cplx lambda) const {
  return -J_ * (B_(t) + lambda * Delta_(t));
}

bool SymmetricSystem::constant_coefficients() const { return B_.is_constant() && Delta_.is_constant(); }

bool SymmetricSystem::piecewise_constant_coefficients() const {
  return B_.is_piecewise_constant() && Delta_.is_piecewise_constant();
}

std::vector<double> SymmetricSystem::breakpoints() const {
  std::vector<double> out = B_.breakpoints();
  const auto more = Delta_.breakpoints();
  out.insert(out.end(), more.begin(), more.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> default_sample_grid(const SymmetricSystem& sys, int uniform_points) {
  std::vector<double> grid;
  const int m = std::max(2, uniform_points);
  for (int i = 0; i < m; ++i) grid.push_back(sys.a() + (sys.b() - sys.a()) * i / (m - 1));
  for (double p : sys.breakpoints()) {
    if (p >= sys.a() && p <= sys.b()) grid.push_back(p);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

ValidationReport validate_system(const SymmetricSystem& sys, const std::vector<double>& samples,
                                 double tol) {
  ValidationReport report;
  for (double t : samples) {
    if (t < sys.a() || t > sys.b()) {
      throw Error(ErrorCode::OutOfInterval, "sample t = " + std::to_string(t) + " outside [a, b]");
    }
    const Matrix B = sys.B()(t);
    const double scale_b = std::max(1.0, B.norm());
    const double herm_defect = (B - B.adjoint()).norm();
    if (herm_defect > tol * scale_b) {
      report.ok = false;
      report.issues.push_back({ErrorCode::BNotHermitian, t, herm_defect});
    }
    const Matrix D = sys.Delta()(t);
    const double scale_d = std::max(1.0, D.norm());
    const double d_herm = (D - D.adjoint()).norm();
    const double lowest = linalg::min_eigenvalue(D);
    if (d_herm > tol * scale_d || lowest < -tol * scale_d) {
      report.ok = false;
      report.issues.push_back({ErrorCode::DeltaNotPSD, t, std::min(lowest, -d_herm)});
    }
  }
  return report;
}

NullManifoldReport probe_null_manifold(const SymmetricSystem& sys, cplx probe_lambda, double tol) {
  const Propagator prop(sys, probe_lambda);
  const CompositeQuadrature q = prop.quadrature();
  const auto ys = prop.sample(q.nodes);
  const Eigen::Index n = sys.n();
  Matrix gram = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < q.size(); ++k) {
    gram += q.weights[k] * (ys[k].adjoint() * sys.Delta()(q.nodes[k]) * ys[k]);
  }
  if (!gram.allFinite()) {
    throw Error(ErrorCode::QuadratureFailure, "Gram matrix of the fundamental frame is not finite");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(gram));
  const auto& ev = es.eigenvalues();
  const double top = std::max(std::abs(ev(0)), std::abs(ev(n - 1)));
  Eigen::Index null_count = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (top == 0.0 || ev(i) <= tol * top) ++null_count;
  }
  NullManifoldReport report;
  report.dim_N = static_cast<int>(null_count);
  report.basis_initial_data = es.eigenvectors().leftCols(null_count);
  report.definite = null_count == 0;
  return report;
}

bool tau_definite(const SymmetricSystem& sys, const Subspace& tau, cplx probe_lambda, double tol) {
  const NullManifoldReport report = probe_null_manifold(sys, probe_lambda, tol);
  if (report.definite) return true;
  const Subspace null_start = Subspace::from_orthonormal(report.basis_initial_data);
  return linalg::intersection_dim(null_start, tau) == 0;
}

}  // namespace specfun
