#include "specfun/quadrature.hpp"


#include <boost/math/quadrature/gauss.hpp>

namespace specfun {
namespace {

template <int N>
GaussLegendreRule make_rule() {
  using Rule = boost::math::quadrature::gauss<double, N>;
  const auto& abscissa = Rule::abscissa();
  const auto& weight = Rule::weights();
  GaussLegendreRule rule;
  // Boost stores the non-negative half; N is even so zero is not a node.
  for (int i = static_cast<int>(abscissa.size()) - 1; i >= 0; --i) {
    rule.nodes.push_back(-abscissa[i]);
    rule.weights.push_back(weight[i]);
  }
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    rule.nodes.push_back(abscissa[i]);
    rule.weights.push_back(weight[i]);
  }

  // Lagrange basis through the Legendre expansion
  //   ℓ_j(s) = Σ_k w_j P_k(x_j) P_k(s) (2k+1)/2,
  // integrated termwise with ∫_{-1}^x P_k = (P_{k+1}(x) - P_{k-1}(x)) / (2k+1).
  auto legendre = [](double x, int kmax) {
    std::vector<double> p(kmax + 2);
    p[0] = 1.0;
    if (kmax + 1 >= 1) p[1] = x;
    for (int k = 1; k <= kmax; ++k) p[k + 1] = ((2.0 * k + 1.0) * x * p[k] - k * p[k - 1]) / (k + 1.0);
    return p;
  };
  rule.cumulative = Eigen::MatrixXd::Zero(N, N);
  std::vector<std::vector<double>> pn(N);
  for (int j = 0; j < N; ++j) pn[j] = legendre(rule.nodes[j], N);
  for (int i = 0; i < N; ++i) {
    const auto& p = pn[i];
    std::vector<double> integral(N);
    integral[0] = rule.nodes[i] + 1.0;
    for (int k = 1; k < N; ++k) integral[k] = (p[k + 1] - p[k - 1]) / (2.0 * k + 1.0);
    for (int j = 0; j < N; ++j) {
      double acc = 0.0;
      for (int k = 0; k < N; ++k) acc += pn[j][k] * (2.0 * k + 1.0) / 2.0 * integral[k];
      rule.cumulative(i, j) = rule.weights[j] * acc;
    }
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
  static const GaussLegendreRule r8 = make_rule<8>();
  static const GaussLegendreRule r16 = make_rule<16>();
  static const GaussLegendreRule r32 = make_rule<32>();
  static const GaussLegendreRule r64 = make_rule<64>();
  switch (order) {
    case 8: return r8;
    case 16: return r16;
    case 32: return r32;
    case 64: return r64;
    default:
      throw Error(ErrorCode::QuadratureFailure,
                  "unsupported Gauss-Legendre order " + std::to_string(order));
  }
}

CompositeQuadrature composite_gauss_legendre(const std::vector<double>& edges, int order) {
  const auto& rule = gauss_legendre(order);
  CompositeQuadrature q;
  q.edges = edges;
  q.order = order;
  q.nodes.reserve((edges.size() > 0 ? edges.size() - 1 : 0) * order);
  q.weights.reserve(q.nodes.capacity());
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double lo = edges[p];
    const double hi = edges[p + 1];
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (int i = 0; i < order; ++i) {
      q.nodes.push_back(mid + half * rule.nodes[i]);
      q.weights.push_back(half * rule.weights[i]);
    }
  }
  return q;
}

CompositeQuadrature composite_gauss_legendre(double a, double b, int panels, int order) {
  std::vector<double> edges(panels + 1);
  for (int i = 0; i <= panels; ++i) edges[i] = a + (b - a) * i / panels;
  edges.back() = b;
  return composite_gauss_legendre(edges, order);
}

std::vector<Matrix> cumulative_integral(const CompositeQuadrature& q,
                                        const std::vector<Matrix>& samples) {
  const auto& rule = gauss_legendre(q.order);
  std::vector<Matrix> out(samples.size());
  if (samples.empty()) return out;
  Matrix running = Matrix::Zero(samples[0].rows(), samples[0].cols());
  for (std::size_t p = 0; p < q.panels(); ++p) {
    const double half = 0.5 * (q.edges[p + 1] - q.edges[p]);
    const std::size_t base = p * q.order;
    for (int i = 0; i < q.order; ++i) {
      Matrix partial = Matrix::Zero(running.rows(), running.cols());
      for (int j = 0; j < q.order; ++j) partial += (half * rule.cumulative(i, j)) * samples[base + j];
      out[base + i] = running + partial;
    }
    for (int j = 0; j < q.order; ++j) running += q.weights[base + j] * samples[base + j];
  }
  return out;
}

}  // namespace specfun
