#pragma once

#include <Eigen/Dense>

namespace korn {

// One-dimensional collocation bases used across the lab.
//
// Chebyshev-Gauss-Lobatto collocation carries three pieces per interval:
// nodes (ascending), Clenshaw-Curtis quadrature weights, and the spectral
// differentiation matrix. Quadrature is exact for polynomial degree < n.
struct Cheb1D {
  Eigen::VectorXd x;   // nodes, ascending, size n
  Eigen::VectorXd w;   // Clenshaw-Curtis weights for the same nodes
  Eigen::MatrixXd D;   // differentiation matrix acting on nodal values
};

// n >= 2 nodes on [a, b].
Cheb1D cheb_lobatto(int n, double a, double b);

// Uniform periodic grid on [0, 2*pi) with trapezoid weights and the standard
// trigonometric differentiation matrix (n must be even). Differentiation is
// exact for wavenumbers < n/2.
struct Trig1D {
  Eigen::VectorXd x;
  Eigen::VectorXd w;
  Eigen::MatrixXd D;
};

Trig1D trig_periodic(int n);

// Gauss-Legendre rule with n points on [a, b]; exact for degree 2n-1.
struct Quad1D {
  Eigen::VectorXd x;
  Eigen::VectorXd w;
};

Quad1D gauss_legendre(int n, double a, double b);

}  // namespace korn
