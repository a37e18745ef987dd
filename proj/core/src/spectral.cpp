#include "specfun/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "specfun/linalg.hpp"
#include "specfun/parallel.hpp"

namespace specfun {
namespace {

double trace_imag(const Matrix& m) { return linalg::imag_part(m).trace().real(); }

// Peak of u ↦ tr Im m(u + iε) near p, from parabola vertices of its
// reciprocal (exactly a parabola for an isolated pole).
double refine_peak(const MSampler& m, double p, double eps) {
  const double delta = 0.5 * eps;
  auto recip = [&](double u) { return 1.0 / trace_imag(m(cplx(u, eps))); };
  for (int iter = 0; iter < 12; ++iter) {
    const double f0 = recip(p);
    const double fm = recip(p - delta);
    const double fp = recip(p + delta);
    if (!(f0 > 0.0 && fm > 0.0 && fp > 0.0)) break;
    const double curvature = fp - 2.0 * f0 + fm;
    if (!(curvature > 0.0)) break;
    double shift = -delta * (fp - fm) / (2.0 * curvature);
    shift = std::clamp(shift, -2.0 * eps, 2.0 * eps);
    p += shift;
    if (std::abs(shift) <= 1e-15 * std::max(1.0, std::abs(p))) break;
  }
  return p;
}

// Value at 0 of the polynomial interpolating (x_k, y_k).
Matrix extrapolate_to_zero(const std::vector<double>& x, const std::vector<Matrix>& y) {
  Matrix out = Matrix::Zero(y.front().rows(), y.front().cols());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double basis = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j != i) basis *= x[j] / (x[j] - x[i]);
    }
    out += basis * y[i];
  }
  return out;
}

std::vector<double> validated_schedule(const std::vector<double>& eps) {
  if (eps.empty()) throw Error(ErrorCode::ExtrapolationDiverged, "empty epsilon schedule");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || (i > 0 && !(eps[i] < eps[i - 1]))) {
      throw Error(ErrorCode::ExtrapolationDiverged, "epsilon schedule must be positive and decreasing");
    }
  }
  return eps;
}

Matrix default_frame(const BoundaryGeometry& geom, const Matrix& frame) {
  if (frame.size() == 0) return geom.U;
  if (frame.rows() != geom.sys.n()) {
    throw Error(ErrorCode::ShapeMismatch, "frame must have n rows");
  }
  return frame;
}

CompositeQuadrature node_rule(const SymmetricSystem& sys, const PropagatorOptions& opts) {
  return composite_gauss_legendre(checkpoint_grid(sys, opts.checkpoints), opts.quadrature_order);
}

double seminorm_squared(const SymmetricSystem& sys, const CompositeQuadrature& q,
                        const std::vector<Vector>& values) {
  double acc = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    acc += q.weights[k] * values[k].dot(sys.Delta()(q.nodes[k]) * values[k]).real();
  }
  return acc;
}

}  // namespace

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(hi > lo) || !(step > 0.0)) {
    throw Error(ErrorCode::InvalidInterval, "grid needs lo < hi and step > 0");
  }
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long k = 0; k <= count; ++k) grid.push_back(lo + step * static_cast<double>(k));
  if (hi - grid.back() > 1e-12 * std::max(1.0, std::abs(hi))) grid.push_back(hi);
  else grid.back() = hi;
  grid.push_back(0.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); }),
             grid.end());
  // The merge above may have replaced an exact 0 by a neighbour within 1e-12.
  for (double& s : grid) {
    if (std::abs(s) <= 1e-12) s = 0.0;
  }
  return grid;
}

DistributionFunction stieltjes_invert(const MSampler& m, std::vector<double> s_grid,
                                      const StieltjesOptions& opts) {
  const std::vector<double> eps = validated_schedule(opts.epsilons);
  s_grid.push_back(0.0);
  std::sort(s_grid.begin(), s_grid.end());
  s_grid.erase(std::unique(s_grid.begin(), s_grid.end()), s_grid.end());

  DistributionFunction sigma;
  sigma.grid = s_grid;
  const double lo = s_grid.front();
  const double hi = s_grid.back();
  const Eigen::Index d = m(cplx(0.5 * (lo + hi), 1.0)).rows();
  const double threshold = opts.threshold_fraction * opts.min_jump;

  // Pole scan at the schedule entry closest to scan_epsilon.
  std::size_t scan_index = 0;
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (std::abs(std::log(eps[i] / opts.scan_epsilon)) <
        std::abs(std::log(eps[scan_index] / opts.scan_epsilon))) {
      scan_index = i;
    }
  }
  const double scan_eps = eps[scan_index];
  const double step = opts.scan_step * scan_eps;
  const double u0 = lo - opts.scan_pad;
  const auto scan_count =
      static_cast<std::size_t>(std::ceil((hi + opts.scan_pad - u0) / step)) + 1;
  std::vector<double> scan(scan_count);
  parallel_for(scan_count, [&](std::size_t i) {
    scan[i] = trace_imag(m(cplx(u0 + step * static_cast<double>(i), scan_eps)));
  }, opts.threads);

  std::vector<double> candidates;
  for (std::size_t i = 1; i + 1 < scan_count; ++i) {
    if (scan[i] > scan[i - 1] && scan[i] >= scan[i + 1] && scan_eps * scan[i] > threshold) {
      candidates.push_back(u0 + step * static_cast<double>(i));
    }
  }

  // Refine each candidate down the schedule; extrapolate ε·Im m(p + iε) to ε = 0
  // through the (up to) three smallest ε.
  const std::size_t fit_points = std::min<std::size_t>(3, eps.size() - scan_index);
  std::vector<Jump> refined(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t c) {
    double p = candidates[c];
    for (std::size_t e = scan_index; e < eps.size(); ++e) p = refine_peak(m, p, eps[e]);
    std::vector<double> xs;
    std::vector<Matrix> ys;
    for (std::size_t e = eps.size() - fit_points; e < eps.size(); ++e) {
      xs.push_back(eps[e]);
      ys.push_back(eps[e] * linalg::imag_part(m(cplx(p, eps[e]))));
    }
    refined[c] = {p, linalg::hermitian_part(extrapolate_to_zero(xs, ys))};
  }, opts.threads);

  std::vector<Jump> poles;
  for (auto& j : refined) {
    if (linalg::max_eigenvalue(j.size) > threshold) poles.push_back(std::move(j));
  }
  std::sort(poles.begin(), poles.end(), [](const Jump& x, const Jump& y) { return x.location < y.location; });
  std::vector<Jump> unique_poles;
  for (auto& j : poles) {
    if (!unique_poles.empty() &&
        std::abs(j.location - unique_poles.back().location) <= 1e-7 * std::max(1.0, std::abs(j.location))) {
      continue;
    }
    unique_poles.push_back(std::move(j));
  }
  for (const auto& j : unique_poles) {
    const double tol = 1e-9 * std::max(1.0, std::abs(j.location));
    if (j.location >= lo - tol && j.location <= hi + tol) sigma.jumps.push_back(j);
  }

  // Continuous part per cell with the detected poles removed, Richardson
  // extrapolated (order 1) over the two smallest ε.
  const std::size_t cells = s_grid.size() - 1;
  std::vector<Matrix> increments(cells, Matrix::Zero(d, d));
  std::vector<char> diverged(cells, 0);
  const GaussLegendreRule& rule = gauss_legendre(opts.panel_order);
  const std::vector<double> rich_eps =
      eps.size() >= 2 ? std::vector<double>{eps[eps.size() - 2], eps.back()} : std::vector<double>{eps.back()};
  parallel_for(cells, [&](std::size_t c) {
    const double a = s_grid[c];
    const double b = s_grid[c + 1];
    const auto panels = static_cast<int>(std::max(1.0, std::ceil((b - a) / opts.panel_width)));
    const double width = (b - a) / panels;
    std::vector<Matrix> per_eps;
    for (double e : rich_eps) {
      Matrix acc = Matrix::Zero(d, d);
      for (int p = 0; p < panels; ++p) {
        const double left = a + width * p;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          const double u = left + 0.5 * width * (rule.nodes[k] + 1.0);
          Matrix density = linalg::imag_part(m(cplx(u, e)));
          for (const auto& j : unique_poles) {
            const double du = u - j.location;
            density -= (e / (du * du + e * e)) * j.size;
          }
          acc += (0.5 * width * rule.weights[k]) * density;
        }
      }
      per_eps.push_back(acc / std::numbers::pi);
    }
    Matrix inc = per_eps.size() == 2
                     ? Matrix((rich_eps[0] * per_eps[1] - rich_eps[1] * per_eps[0]) / (rich_eps[0] - rich_eps[1]))
                     : per_eps[0];
    inc = linalg::hermitian_part(inc);
    if (linalg::min_eigenvalue(inc) < -opts.monotone_floor) diverged[c] = 1;
    increments[c] = std::move(inc);
  }, opts.threads);
  for (std::size_t c = 0; c < cells; ++c) {
    if (diverged[c]) sigma.diverged_cells.push_back(c);
  }

  const auto zero = static_cast<std::size_t>(
      std::find(s_grid.begin(), s_grid.end(), 0.0) - s_grid.begin());
  sigma.continuous.assign(s_grid.size(), Matrix::Zero(d, d));
  for (std::size_t i = zero; i + 1 < s_grid.size(); ++i) {
    sigma.continuous[i + 1] = sigma.continuous[i] + increments[i];
  }
  for (std::size_t i = zero; i > 0; --i) {
    sigma.continuous[i - 1] = sigma.continuous[i] - increments[i - 1];
  }
  sigma.values = sigma.continuous;
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const double s = s_grid[i];
    for (const auto& j : sigma.jumps) {
      if (s >= 0.0 && j.location >= 0.0 && j.location < s) sigma.values[i] += j.size;
      if (s < 0.0 && j.location >= s && j.location < 0.0) sigma.values[i] -= j.size;
    }
  }
  return sigma;
}

FourierResult fourier_transform(const BoundaryGeometry& geom, const VectorFunction& f,
                                const std::vector<double>& s_grid, const Matrix& frame,
                                const FourierOptions& opts) {
  const SymmetricSystem& sys = geom.sys;
  const Matrix K = default_frame(geom, frame);
  const CompositeQuadrature q = node_rule(sys, opts.propagation);
  std::vector<Vector> weighted(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    const Vector fk = f(q.nodes[k]);
    if (fk.size() != sys.n()) throw Error(ErrorCode::ShapeMismatch, "f must take values in C^n");
    weighted[k] = q.weights[k] * (sys.Delta()(q.nodes[k]) * fk);
  }
  FourierResult out;
  out.s_eval = s_grid;
  out.f_hat.assign(s_grid.size(), Vector());
  parallel_for(s_grid.size(), [&](std::size_t i) {
    const Propagator prop(sys, cplx(s_grid[i], 0.0), opts.propagation);
    const std::vector<Matrix> Y = prop.sample(q.nodes);
    Vector acc = Vector::Zero(sys.n());
    for (std::size_t k = 0; k < q.size(); ++k) acc += Y[k].adjoint() * weighted[k];
    out.f_hat[i] = K.adjoint() * acc;
  }, opts.threads);
  return out;
}

double weighted_norm_squared(const SymmetricSystem& sys, const VectorFunction& f,
                             const PropagatorOptions& opts) {
  return weighted_inner(sys, f, f, node_rule(sys, opts)).real();
}

ParsevalReport parseval_defect(const BoundaryGeometry& geom, const DistributionFunction& sigma,
                               const VectorFunction& f, const Matrix& frame,
                               const FourierOptions& opts, double continuous_floor) {
  std::vector<double> support;
  std::vector<Matrix> weights;
  for (const auto& j : sigma.jumps) {
    support.push_back(j.location);
    weights.push_back(j.size);
  }
  for (std::size_t i = 0; i + 1 < sigma.grid.size(); ++i) {
    const Matrix inc = sigma.continuous[i + 1] - sigma.continuous[i];
    if (linalg::max_eigenvalue(inc) > continuous_floor) {
      support.push_back(0.5 * (sigma.grid[i] + sigma.grid[i + 1]));
      weights.push_back(inc);
    }
  }
  ParsevalReport report;
  report.transform = fourier_transform(geom, f, support, frame, opts);
  report.transform.weights = weights;
  double lhs = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const Vector& fh = report.transform.f_hat[i];
    lhs += fh.dot(weights[i] * fh).real();
  }
  const double rhs = weighted_norm_squared(geom.sys, f, opts.propagation);
  report.transform.parseval_lhs = lhs;
  report.transform.parseval_rhs = rhs;
  report.defect = rhs > 1e-300 ? std::abs(lhs - rhs) / rhs : 0.0;
  return report;
}

InverseResult inverse_transform(const BoundaryGeometry& geom, const FourierResult& transform,
                                const std::vector<double>& t_grid, const VectorFunction& f,
                                const Matrix& frame, const FourierOptions& opts) {
  const SymmetricSystem& sys = geom.sys;
  const Eigen::Index n = sys.n();
  const Matrix K = default_frame(geom, frame);
  if (transform.weights.size() != transform.s_eval.size()) {
    throw Error(ErrorCode::ShapeMismatch, "transform carries no dσ weights for its support");
  }
  const CompositeQuadrature q = node_rule(sys, opts.propagation);
  std::vector<std::size_t> order(t_grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return t_grid[x] < t_grid[y]; });
  std::vector<double> t_sorted;
  for (std::size_t i : order) {
    if (t_grid[i] < sys.a() || t_grid[i] > sys.b()) {
      throw Error(ErrorCode::OutOfInterval, "t = " + std::to_string(t_grid[i]) + " outside [a, b]");
    }
    t_sorted.push_back(t_grid[i]);
  }

  // Fixed-size blocks summed in order keep the result independent of threads.
  constexpr std::size_t block = 8;
  const std::size_t support = transform.s_eval.size();
  const std::size_t blocks = (support + block - 1) / block;
  std::vector<std::vector<Vector>> node_parts(blocks), grid_parts(blocks);
  parallel_for(blocks, [&](std::size_t bidx) {
    std::vector<Vector> at_nodes(q.size(), Vector::Zero(n));
    std::vector<Vector> at_grid(t_sorted.size(), Vector::Zero(n));
    for (std::size_t i = bidx * block; i < std::min(support, (bidx + 1) * block); ++i) {
      const Propagator prop(sys, cplx(transform.s_eval[i], 0.0), opts.propagation);
      const Vector coef = K * (transform.weights[i] * transform.f_hat[i]);
      const auto Yq = prop.sample(q.nodes);
      for (std::size_t k = 0; k < q.size(); ++k) at_nodes[k] += Yq[k] * coef;
      const auto Yt = prop.sample(t_sorted);
      for (std::size_t k = 0; k < t_sorted.size(); ++k) at_grid[k] += Yt[k] * coef;
    }
    node_parts[bidx] = std::move(at_nodes);
    grid_parts[bidx] = std::move(at_grid);
  }, opts.threads);

  std::vector<Vector> rec_nodes(q.size(), Vector::Zero(n));
  InverseResult out;
  out.t = t_grid;
  out.values.assign(t_grid.size(), Vector::Zero(n));
  for (std::size_t bidx = 0; bidx < blocks; ++bidx) {
    for (std::size_t k = 0; k < q.size(); ++k) rec_nodes[k] += node_parts[bidx][k];
    for (std::size_t k = 0; k < t_sorted.size(); ++k) out.values[order[k]] += grid_parts[bidx][k];
  }
  std::vector<Vector> original(q.size()), diff(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    original[k] = f(q.nodes[k]);
    diff[k] = original[k] - rec_nodes[k];
  }
  const double norm = seminorm_squared(sys, q, original);
  out.error = norm > 1e-300 ? std::sqrt(std::max(0.0, seminorm_squared(sys, q, diff)) / norm) : 0.0;
  return out;
}

CharacteristicMatrix characteristic_matrix(const MFunctionSample& m, const BoundaryGeometry& geom) {
  const Eigen::Index d0 = geom.dim_h0();
  const int k = geom.h1perp_dim;
  if (m.value.rows() != d0 || m.value.cols() != d0) {
    throw Error(ErrorCode::ShapeMismatch, "m-function does not match dim H0");
  }
  CharacteristicMatrix out;
  out.lambda = m.lambda;
  out.omega = Matrix::Zero(d0 + k, d0 + k);
  out.omega.topLeftCorner(d0, d0) = m.value;
  // H₁⊥ is the leading block of 𝐇₀.
  out.omega.block(0, d0, k, k) = -0.5 * Matrix::Identity(k, k);
  out.omega.block(d0, 0, k, k) = -0.5 * Matrix::Identity(k, k);

  std::vector<int> order = geom.index.h0;
  order.insert(order.end(), geom.index.a1_h1perp.begin(), geom.index.a1_h1perp.end());
  out.omega_natural = Matrix::Zero(d0 + k, d0 + k);
  for (Eigen::Index r = 0; r < d0 + k; ++r) {
    for (Eigen::Index c = 0; c < d0 + k; ++c) out.omega_natural(order[r], order[c]) = out.omega(r, c);
  }
  return out;
}

ResolventReport resolvent_crosscheck(const BoundaryGeometry& geom, const TripletMaps& triplet,
                                     const BoundaryParameter& param, cplx lambda,
                                     const VectorFunction& f, const SolveOptions& opts) {
  if (!(lambda.imag() > opts.min_imag)) {
    throw Error(ErrorCode::NearRealAxis, "resolvent needs Im lambda > 0");
  }
  const SymmetricSystem& sys = geom.sys;
  const Eigen::Index n = sys.n();
  const Matrix& J = sys.J();
  const CompositeQuadrature q = node_rule(sys, opts.propagation);
  const std::size_t N = q.size();

  std::vector<Vector> fv(N), delta_f(N);
  for (std::size_t k = 0; k < N; ++k) {
    fv[k] = f(q.nodes[k]);
    if (fv[k].size() != n) throw Error(ErrorCode::ShapeMismatch, "f must take values in C^n");
    delta_f[k] = sys.Delta()(q.nodes[k]) * fv[k];
  }

  // Kernel path: Y_Ũ(x,λ)[(Ω − ½J)∫_a^x + (Ω + ½J)∫_x^b] Y_Ũ*(t,λ̄)Δf dt.
  const Matrix omega =
      characteristic_matrix(m_tau(geom, triplet, param, lambda, opts), geom).omega_natural;
  const Propagator at_lambda(sys, lambda, opts.propagation);
  const Propagator at_conj(sys, std::conj(lambda), opts.propagation);
  const auto Yl = at_lambda.sample(q.nodes);
  const auto Yc = at_conj.sample(q.nodes);
  std::vector<Matrix> integrand(N);
  for (std::size_t k = 0; k < N; ++k) integrand[k] = geom.U_tilde.adjoint() * Yc[k].adjoint() * delta_f[k];
  const std::vector<Matrix> below = cumulative_integral(q, integrand);
  Matrix total = Matrix::Zero(n, 1);
  for (std::size_t k = 0; k < N; ++k) total += q.weights[k] * integrand[k];
  const Matrix left = omega - 0.5 * J;
  const Matrix right = omega + 0.5 * J;

  ResolventReport report;
  report.nodes = q.nodes;
  report.y_kernel.resize(N);
  for (std::size_t k = 0; k < N; ++k) {
    report.y_kernel[k] = Yl[k] * geom.U_tilde * (left * below[k] + right * (total - below[k]));
  }

  // Direct path: integrate Z = [Y | y_p] with Z' = −J(B + λΔ)Z − [0 | JΔf].
  const auto rhs = [&](double t, const Matrix& z) {
    Matrix dz = sys.generator(t, lambda) * z;
    dz.col(n) -= J * (sys.Delta()(t) * f(t));
    return dz;
  };
  Matrix z = Matrix::Zero(n, n + 1);
  z.leftCols(n) = Matrix::Identity(n, n);
  double h = 0.0;
  double t = sys.a();
  std::vector<Matrix> z_nodes(N);
  for (std::size_t k = 0; k < N; ++k) {
    z = integrate_adaptive(rhs, t, q.nodes[k], z, h, opts.propagation.rtol * 1e-2,
                           opts.propagation.atol * 1e-2, opts.propagation.max_steps);
    t = q.nodes[k];
    z_nodes[k] = z;
  }
  z = integrate_adaptive(rhs, t, sys.b(), z, h, opts.propagation.rtol * 1e-2,
                         opts.propagation.atol * 1e-2, opts.propagation.max_steps);

  const Matrix conditions = boundary_conditions(geom, triplet, param.C0(lambda), param.C1(lambda));
  Matrix homogeneous(2 * n, n);
  homogeneous.topRows(n) = geom.U_tilde_inv;
  homogeneous.bottomRows(n) = z.leftCols(n);
  Matrix particular = Matrix::Zero(2 * n, 1);
  particular.bottomRows(n) = z.col(n);
  const Matrix A = conditions * homogeneous;
  Eigen::FullPivLU<Matrix> lu(A);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularBVP, "resolvent boundary system is singular");
  const Vector c = lu.solve(-conditions * particular);
  report.boundary_residual = (conditions * (homogeneous * c + particular)).cwiseAbs().maxCoeff();

  report.y_bvp.resize(N);
  std::vector<Matrix> derivative(N);
  double scale = 1.0;
  for (std::size_t k = 0; k < N; ++k) {
    report.y_bvp[k] = z_nodes[k].leftCols(n) * c + z_nodes[k].col(n);
    derivative[k] = sys.generator(q.nodes[k], lambda) * report.y_bvp[k] - J * delta_f[k];
    scale = std::max(scale, report.y_bvp[k].cwiseAbs().maxCoeff());
  }
  const std::vector<Matrix> integral = cumulative_integral(q, derivative);
  for (std::size_t k = 0; k < N; ++k) {
    const Vector defect = report.y_bvp[k] - c - integral[k];
    report.ode_residual = std::max(report.ode_residual, defect.cwiseAbs().maxCoeff() / scale);
  }

  std::vector<Vector> diff(N);
  for (std::size_t k = 0; k < N; ++k) diff[k] = report.y_kernel[k] - report.y_bvp[k];
  const double norm = seminorm_squared(sys, q, report.y_bvp);
  report.difference = norm > 1e-300 ? std::sqrt(std::max(0.0, seminorm_squared(sys, q, diff)) / norm) : 0.0;
  return report;
}

DistributionFunction rebase_pseudospectral(const DistributionFunction& sigma, const Matrix& X) {
  const Eigen::Index d = sigma.dim();
  if (X.rows() != d || X.cols() != d) {
    throw Error(ErrorCode::ShapeMismatch, "X must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  if (!X.fullPivLu().isInvertible()) throw Error(ErrorCode::ShapeMismatch, "X must be invertible");
  DistributionFunction out = sigma;
  const auto congruence = [&](Matrix& m) { m = X * m * X.adjoint(); };
  for (auto& v : out.values) congruence(v);
  for (auto& v : out.continuous) congruence(v);
  for (auto& j : out.jumps) congruence(j.size);
  return out;
}

ExistenceReport existence_report(const SymmetricSystem& sys, const Subspace& tau, cplx probe_lambda) {
  ExistenceReport r;
  const Dimensions& dims = sys.dims();
  r.lower_bound = dims.nu + dims.nu_hat;
  r.upper_bound = dims.n();
  const NullManifoldReport null = probe_null_manifold(sys, probe_lambda);
  r.definite = null.definite;
  r.null_manifold_dim = null.dim_N;
  r.mul_trivial = r.definite;
  if (!r.definite) r.notes.emplace_back("system is not definite; mul T may be nontrivial");

  if (tau.ambient() != dims.n()) {
    r.notes.emplace_back("tau does not live in C^n");
    return r;
  }
  r.companion_neutral = is_neutral(sys, j_companion(sys, tau));
  if (!r.companion_neutral) r.notes.emplace_back("the J-companion of tau is not neutral");
  r.dimension_ok = tau.dim() >= r.lower_bound && tau.dim() <= r.upper_bound;
  if (!r.dimension_ok) r.notes.emplace_back("dim tau is outside [nu + nu_hat, n]");
  r.tau_definite = tau_definite(sys, tau, probe_lambda);
  if (!r.tau_definite) r.notes.emplace_back("a nonzero null-manifold solution starts in tau");

  r.exists = r.companion_neutral && r.dimension_ok && r.tau_definite;
  r.spectral_exists = r.exists && r.mul_trivial;
  if (r.exists) {
    r.n_sigma = static_cast<int>(tau.dim());
    r.minimal = r.n_sigma == r.lower_bound;
  }
  return r;
}

}  // namespace specfun
