#include "specfun/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specfun {
namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

double scaled_rms(const Matrix& err, const Matrix& y0, const Matrix& y1, double rtol, double atol) {
  double acc = 0.0;
  const Eigen::Index size = err.size();
  for (Eigen::Index i = 0; i < size; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double r = std::abs(err(i)) / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(size, 1)));
}

double initial_step(const MatrixRhs& rhs, double t0, const Matrix& y0, const Matrix& f0,
                    double span, double rtol, double atol) {
  const Matrix zero = Matrix::Zero(y0.rows(), y0.cols());
  const double d0 = scaled_rms(y0, y0, zero, rtol, atol);
  const double d1 = scaled_rms(f0, y0, zero, rtol, atol);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  const Matrix y1 = y0 + h0 * f0;
  const Matrix f1 = rhs(t0 + h0, y1);
  const double d2 = scaled_rms(f1 - f0, y0, zero, rtol, atol) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, span});
}

Matrix dense_generator(const SymmetricSystem& sys, double lo, double hi, cplx lambda) {
  return sys.generator(0.5 * (lo + hi), lambda);
}

}  // namespace

Matrix integrate_adaptive(const MatrixRhs& rhs, double t0, double t1, Matrix z, double& h,
                          double rtol, double atol, std::size_t max_steps) {
  if (t1 == t0) return z;
  const double direction = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  double t = t0;
  Matrix k1 = rhs(t, z);
  if (h <= 0.0) h = initial_step(rhs, t0, z, k1 * direction, span, rtol, atol);
  h = std::min(h, span);
  std::size_t steps = 0;
  while ((t1 - t) * direction > 0.0) {
    if (++steps > max_steps) {
      throw Error(ErrorCode::StepSizeUnderflow, "step budget exhausted near t = " + std::to_string(t));
    }
    const double remaining = std::abs(t1 - t);
    bool last = false;
    double step = h;
    if (step >= remaining) {
      step = remaining;
      last = true;
    }
    const double min_step = 1e-14 * std::max(1.0, std::abs(t));
    if (step < min_step && !last) {
      throw Error(ErrorCode::StepSizeUnderflow, "step size underflow near t = " + std::to_string(t));
    }
    const double hs = step * direction;
    const Matrix k2 = rhs(t + c2 * hs, z + hs * (a21 * k1));
    const Matrix k3 = rhs(t + c3 * hs, z + hs * (a31 * k1 + a32 * k2));
    const Matrix k4 = rhs(t + c4 * hs, z + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    const Matrix k5 = rhs(t + c5 * hs, z + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Matrix k6 = rhs(t + hs, z + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Matrix znew = z + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Matrix k7 = rhs(t + hs, znew);
    const Matrix err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = scaled_rms(err, z, znew, rtol, atol);
    if (!std::isfinite(en)) {
      throw Error(ErrorCode::StepSizeUnderflow, "non-finite solution near t = " + std::to_string(t));
    }
    if (en <= 1.0 || step <= min_step) {
      t = last ? t1 : t + hs;
      z = znew;
      k1 = k7;
      const double grow = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      // Keep the natural step for the next call instead of the clipped one.
      h = last ? std::max(h, step) : step * grow;
    } else {
      h = step * std::clamp(0.9 * std::pow(en, -0.2), 0.2, 1.0);
    }
  }
  return z;
}

std::vector<double> checkpoint_grid(const SymmetricSystem& sys, int checkpoints) {
  const double a = sys.a();
  const double b = sys.b();
  const int panels = std::max(1, checkpoints);
  std::vector<double> grid;
  grid.reserve(panels + 1);
  for (int i = 0; i <= panels; ++i) grid.push_back(a + (b - a) * i / panels);
  grid.back() = b;
  for (double p : sys.breakpoints()) {
    if (p > a && p < b) grid.push_back(p);
  }
  std::sort(grid.begin(), grid.end());
  const double merge = 1e-12 * (b - a);
  std::vector<double> out;
  for (double t : grid) {
    if (out.empty() || t - out.back() > merge) out.push_back(t);
  }
  out.back() = b;
  return out;
}

Propagator::Propagator(const SymmetricSystem& sys, cplx lambda, PropagatorOptions opts)
    : sys_(sys), lambda_(lambda), opts_(opts) {
  method_ = sys_.piecewise_constant_coefficients() ? PropagationMethod::Exponential
                                                   : PropagationMethod::AdaptiveRungeKutta;
  times_ = checkpoint_grid(sys_, opts_.checkpoints);
  const Eigen::Index n = sys_.n();
  values_.resize(times_.size());
  values_[0] = Matrix::Identity(n, n);
  if (method_ == PropagationMethod::Exponential) {
    for (std::size_t i = 1; i < times_.size(); ++i) {
      const Matrix a = dense_generator(sys_, times_[i - 1], times_[i], lambda_);
      values_[i] = linalg::expm((times_[i] - times_[i - 1]) * a) * values_[i - 1];
    }
  } else {
    double h = 0.0;
    const MatrixRhs rhs = [this](double t, const Matrix& y) -> Matrix { return sys_.generator(t, lambda_) * y; };
    for (std::size_t i = 1; i < times_.size(); ++i) {
      values_[i] = integrate_adaptive(rhs, times_[i - 1], times_[i], values_[i - 1], h, opts_.rtol,
                                      opts_.atol, opts_.max_steps);
    }
  }
}

Matrix Propagator::transfer(double t0, double t1) const {
  const Eigen::Index n = sys_.n();
  if (t0 == t1) return Matrix::Identity(n, n);
  if (method_ == PropagationMethod::Exponential) {
    // Split at coefficient breakpoints so every factor has a constant generator.
    std::vector<double> cuts{t0};
    const double lo = std::min(t0, t1);
    const double hi = std::max(t0, t1);
    for (double p : sys_.breakpoints()) {
      if (p > lo && p < hi) cuts.push_back(p);
    }
    if (t1 < t0) std::sort(cuts.begin() + 1, cuts.end(), std::greater<>());
    else std::sort(cuts.begin() + 1, cuts.end());
    cuts.push_back(t1);
    Matrix phi = Matrix::Identity(n, n);
    for (std::size_t i = 1; i < cuts.size(); ++i) {
      const Matrix a = dense_generator(sys_, cuts[i - 1], cuts[i], lambda_);
      phi = linalg::expm((cuts[i] - cuts[i - 1]) * a) * phi;
    }
    return phi;
  }
  std::vector<double> cuts{t0};
  for (double p : sys_.breakpoints()) {
    if ((p - t0) * (t1 - p) > 0.0) cuts.push_back(p);
  }
  if (t1 < t0) std::sort(cuts.begin() + 1, cuts.end(), std::greater<>());
  else std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(t1);
  const MatrixRhs rhs = [this](double t, const Matrix& y) -> Matrix { return sys_.generator(t, lambda_) * y; };
  Matrix phi = Matrix::Identity(n, n);
  double h = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    phi = integrate_adaptive(rhs, cuts[i - 1], cuts[i], phi, h, opts_.rtol, opts_.atol, opts_.max_steps);
  }
  return phi;
}

Matrix Propagator::at(double t) const {
  const double a = times_.front();
  const double b = times_.back();
  if (t < a || t > b) {
    throw Error(ErrorCode::OutOfInterval, "t = " + std::to_string(t) + " outside [a, b]");
  }
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t i = static_cast<std::size_t>(std::distance(times_.begin(), it));
  i = i == 0 ? 0 : i - 1;
  if (times_[i] == t) return values_[i];
  if (method_ == PropagationMethod::Exponential) {
    const double hi = i + 1 < times_.size() ? times_[i + 1] : t;
    const Matrix gen = dense_generator(sys_, times_[i], hi, lambda_);
    return linalg::expm((t - times_[i]) * gen) * values_[i];
  }
  double h = 0.0;
  const MatrixRhs rhs = [this](double s, const Matrix& y) -> Matrix { return sys_.generator(s, lambda_) * y; };
  return integrate_adaptive(rhs, times_[i], t, values_[i], h, opts_.rtol, opts_.atol, opts_.max_steps);
}

std::vector<Matrix> Propagator::sample(const std::vector<double>& times) const {
  std::vector<Matrix> out;
  out.reserve(times.size());
  if (method_ == PropagationMethod::Exponential) {
    for (double t : times) out.push_back(at(t));
    return out;
  }
  // March within each checkpoint panel, restarting at every checkpoint so
  // results do not depend on which other times were requested.
  const MatrixRhs rhs = [this](double s, const Matrix& y) -> Matrix { return sys_.generator(s, lambda_) * y; };
  std::size_t panel = std::numeric_limits<std::size_t>::max();
  double t_cur = 0.0;
  Matrix y_cur;
  double h = 0.0;
  for (double t : times) {
    if (t < times_.front() || t > times_.back()) {
      throw Error(ErrorCode::OutOfInterval, "t = " + std::to_string(t) + " outside [a, b]");
    }
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t i = static_cast<std::size_t>(std::distance(times_.begin(), it));
    i = i == 0 ? 0 : i - 1;
    if (times_[i] == t) {
      out.push_back(values_[i]);
      continue;
    }
    if (i != panel || t < t_cur) {
      panel = i;
      t_cur = times_[i];
      y_cur = values_[i];
      h = 0.0;
    }
    y_cur = integrate_adaptive(rhs, t_cur, t, y_cur, h, opts_.rtol, opts_.atol, opts_.max_steps);
    t_cur = t;
    out.push_back(y_cur);
  }
  return out;
}

CompositeQuadrature Propagator::quadrature() const {
  return composite_gauss_legendre(times_, opts_.quadrature_order);
}

Matrix propagate(const SymmetricSystem& sys, cplx lambda, double t, PropagatorOptions opts) {
  if (t < sys.a() || t > sys.b()) {
    throw Error(ErrorCode::OutOfInterval, "t = " + std::to_string(t) + " outside [a, b]");
  }
  return Propagator(sys, lambda, opts).at(t);
}

GraphFrame solution_graph(const SymmetricSystem& sys, cplx lambda, PropagatorOptions opts) {
  const Eigen::Index n = sys.n();
  const double a = sys.a();
  const double b = sys.b();
  // Panels on which the generator is smooth (constant for the exponential path).
  std::vector<double> edges{a};
  for (double p : sys.breakpoints()) {
    if (p > a && p < b) edges.push_back(p);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());

  const double rate = sys.J().norm() *
                      (sys.B().norm_bound(a, b) + std::abs(lambda) * sys.Delta().norm_bound(a, b));
  const bool exponential = sys.piecewise_constant_coefficients();
  const MatrixRhs rhs = [&sys, lambda](double t, const Matrix& y) -> Matrix { return sys.generator(t, lambda) * y; };
  double h = 0.0;

  Matrix frame(2 * n, n);
  frame.topRows(n) = Matrix::Identity(n, n) / std::sqrt(2.0);
  frame.bottomRows(n) = Matrix::Identity(n, n) / std::sqrt(2.0);
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double lo = edges[p];
    const double hi = edges[p + 1];
    const double len = hi - lo;
    if (len <= 0.0) continue;
    const auto pieces = static_cast<long>(std::max(1.0, std::ceil(rate * len / opts.segment_growth)));
    const double step = len / static_cast<double>(pieces);
    Matrix phi_const;
    if (exponential) phi_const = linalg::expm(step * sys.generator(0.5 * (lo + hi), lambda));
    for (long k = 0; k < pieces; ++k) {
      const double s0 = lo + step * static_cast<double>(k);
      const double s1 = k + 1 == pieces ? hi : lo + step * static_cast<double>(k + 1);
      const Matrix phi = exponential ? phi_const
                                     : integrate_adaptive(rhs, s0, s1, Matrix::Identity(n, n), h, opts.rtol,
                                                          opts.atol, opts.max_steps);
      frame.bottomRows(n) = phi * frame.bottomRows(n);
      Eigen::HouseholderQR<Matrix> qr(frame);
      frame = qr.householderQ() * Matrix::Identity(2 * n, n);
    }
  }
  return GraphFrame{frame.topRows(n), frame.bottomRows(n)};
}

double green_identity_defect(const SymmetricSystem& sys, cplx lambda, cplx mu, double t,
                             PropagatorOptions opts) {
  if (t < sys.a() || t > sys.b()) {
    throw Error(ErrorCode::OutOfInterval, "t = " + std::to_string(t) + " outside [a, b]");
  }
  const Propagator left(sys, std::conj(lambda), opts);
  const Propagator right(sys, mu, opts);
  std::vector<double> edges;
  for (double s : left.checkpoint_times()) {
    if (s < t) edges.push_back(s);
  }
  edges.push_back(t);
  const Matrix& J = sys.J();
  const Eigen::Index n = sys.n();
  Matrix integral = Matrix::Zero(n, n);
  if (edges.size() >= 2) {
    const CompositeQuadrature q = composite_gauss_legendre(edges, opts.quadrature_order);
    const auto yl = left.sample(q.nodes);
    const auto yr = right.sample(q.nodes);
    for (std::size_t k = 0; k < q.size(); ++k) {
      integral += q.weights[k] * (yl[k].adjoint() * sys.Delta()(q.nodes[k]) * yr[k]);
    }
  }
  const Matrix yl_t = left.at(t);
  const Matrix yr_t = right.at(t);
  const Matrix residual = yl_t.adjoint() * J * yr_t - J - (mu - lambda) * integral;
  return linalg::spectral_norm(residual);
}

SolutionFrame::SolutionFrame(std::shared_ptr<const Propagator> propagator, Matrix initial)
    : propagator_(std::move(propagator)), initial_(std::move(initial)) {}

Matrix SolutionFrame::operator()(double t) const { return propagator_->at(t) * initial_; }

std::vector<Matrix> SolutionFrame::sample(const std::vector<double>& times) const {
  auto ys = propagator_->sample(times);
  for (auto& y : ys) y = y * initial_;
  return ys;
}

cplx weighted_inner(const SymmetricSystem& sys, const VectorFunction& f, const VectorFunction& g,
                    const CompositeQuadrature& q) {
  cplx acc = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double t = q.nodes[k];
    acc += q.weights[k] * g(t).dot(sys.Delta()(t) * f(t));
  }
  return acc;
}

cplx weighted_inner(const SymmetricSystem& sys, const VectorFunction& f, const VectorFunction& g) {
  const PropagatorOptions opts;
  return weighted_inner(sys, f, g,
                        composite_gauss_legendre(checkpoint_grid(sys, opts.checkpoints),
                                                 opts.quadrature_order));
}

Matrix weighted_gram(const SymmetricSystem& sys, const CompositeQuadrature& q,
                     const std::vector<Matrix>& f_values, const std::vector<Matrix>& g_values) {
  if (f_values.size() != q.size() || g_values.size() != q.size()) {
    throw Error(ErrorCode::ShapeMismatch, "frame samples do not match the quadrature nodes");
  }
  if (q.size() == 0) return Matrix();
  Matrix acc = Matrix::Zero(g_values[0].cols(), f_values[0].cols());
  for (std::size_t k = 0; k < q.size(); ++k) {
    acc += q.weights[k] * (g_values[k].adjoint() * sys.Delta()(q.nodes[k]) * f_values[k]);
  }
  return acc;
}

Matrix weighted_gram(const SymmetricSystem& sys, const SolutionFrame& f, const SolutionFrame& g) {
  const CompositeQuadrature q = f.propagator().quadrature();
  return weighted_gram(sys, q, f.sample(q.nodes), g.sample(q.nodes));
}

}  // namespace specfun
