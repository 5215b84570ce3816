#pragma once

namespace mlsmooth {

/// Inverse error function on (-1, 1).
/// Rational initial approximation (Acklam's inverse normal CDF) refined by
/// two Newton steps on erf; absolute error below 1e-12 on
/// (-1 + 1e-9, 1 - 1e-9). Throws std::invalid_argument outside (-1, 1).
double erf_inv(double y);

/// Standard normal quantile, norm_quantile(u) = sqrt(2) * erf_inv(2u - 1),
/// u in (0, 1).
double norm_quantile(double u);

/// Standard normal CDF.
double norm_cdf(double x);

/// log N(x; mean, sd^2). sd == 0 degenerates to a point mass at the mean
/// (+inf at the mean, -inf elsewhere).
double norm_logpdf(double x, double mean, double sd);

}  // namespace mlsmooth
