#pragma once

#include <vector>

namespace mlsmooth {

struct Quad1D {
    std::vector<double> x;
    std::vector<double> w;
};

/// Gauss quadrature with respect to the standard normal weight
/// (probabilists' Hermite); weights are positive and sum to 1, exact for
/// polynomials of degree <= 2n - 1.
Quad1D gauss_hermite_normal(int n);

/// Gauss-Legendre rule on [-1, 1]; weights sum to 2.
Quad1D gauss_legendre(int n);

/// Tensorized normal-weight quadrature over `dim` dimensions
/// (order nodes per dimension).
struct QuadratureRule {
    int dim = 1;
    int order = 1;
    std::vector<std::vector<double>> nodes;  // nodes[q] has dim entries
    std::vector<double> weights;             // positive, sum to 1
};

QuadratureRule tensor_normal_quadrature(int dim, int order);

}  // namespace mlsmooth
