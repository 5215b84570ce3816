#pragma once

namespace mlsmooth {

/// Basis family for monotone triangular map components.
///
/// Univariate building blocks are damped probabilists' Hermite functions
/// psi_k(x) = He_k(x) exp(-x^2 / 4). Off-diagonal arguments use the family
/// extended with constant and linear elements,
///   index 0 -> 1, index 1 -> x, index k >= 2 -> psi_{k-2}(x),
/// while the diagonal (integrand) argument is extended with the constant
/// element only,
///   index 0 -> 1, index k >= 1 -> psi_{k-1}(t).
/// Multivariate basis functions are products of these, truncated at total
/// degree `order` per component.
struct BasisSpec {
    int order = 3;
};

/// Probabilists' Hermite polynomial He_k.
double hermite_he(int k, double x);

/// psi_k(x) = He_k(x) exp(-x^2/4) and its derivative.
void hermite_fn(int k, double x, double& val, double& dval);

/// Off-diagonal univariate element (constant/linear extended family).
void offdiag_basis(int k, double x, double& val, double& dval);

/// Diagonal univariate element (constant extended family).
void diag_basis(int k, double x, double& val, double& dval);

}  // namespace mlsmooth
