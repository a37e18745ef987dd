#pragma once

#include <vector>

#include "specfun/types.hpp"

namespace specfun {

// Gauss–Legendre rule on [-1, 1].  Supported orders: 8, 16, 32, 64.
struct GaussLegendreRule {
  std::vector<double> nodes;    // increasing
  std::vector<double> weights;
  // cumulative(i, j): ∫_{-1}^{nodes[i]} ℓ_j(s) ds for the Lagrange basis ℓ_j
  // on the nodes, so partial integrals of a sampled function are exact for
  // polynomials of degree < order.
  Eigen::MatrixXd cumulative;
};

const GaussLegendreRule& gauss_legendre(int order);

// Composite rule with one Gauss–Legendre block per panel.
struct CompositeQuadrature {
  std::vector<double> edges;    // panel edges, increasing
  int order = 32;               // nodes per panel
  std::vector<double> nodes;    // panel-major order
  std::vector<double> weights;

  std::size_t panels() const { return edges.empty() ? 0 : edges.size() - 1; }
  std::size_t size() const { return nodes.size(); }
};

CompositeQuadrature composite_gauss_legendre(const std::vector<double>& edges, int order = 32);
CompositeQuadrature composite_gauss_legendre(double a, double b, int panels, int order = 32);

// Cumulative integrals F(x_k) = ∫_a^{x_k} g for every node x_k of q, given
// samples g(x_k) stacked as columns of a matrix-valued function flattened to
// vectors (one Matrix per node).
std::vector<Matrix> cumulative_integral(const CompositeQuadrature& q,
                                        const std::vector<Matrix>& samples);

}  // namespace specfun
