#include "mlsmooth/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mlsmooth {

namespace {

// Acklam's rational approximation to the inverse normal CDF.
// Relative error below 1.15e-9 on (0, 1); used as a seed for Newton.
double inv_norm_cdf_seed(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

constexpr double kSqrtPi = 1.7724538509055160273;

}  // namespace

double erf_inv(double y) {
    if (!(y > -1.0 && y < 1.0)) {
        throw std::invalid_argument("erf_inv: argument must be in (-1, 1)");
    }
    if (y == 0.0) return 0.0;
    double x = inv_norm_cdf_seed(0.5 * (y + 1.0)) / std::sqrt(2.0);
    // Newton on erf(x) - y; derivative 2/sqrt(pi) * exp(-x^2).
    for (int it = 0; it < 2; ++it) {
        double r = std::erf(x) - y;
        x -= r * 0.5 * kSqrtPi * std::exp(x * x);
    }
    return x;
}

double norm_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) {
        throw std::invalid_argument("norm_quantile: argument must be in (0, 1)");
    }
    return std::sqrt(2.0) * erf_inv(2.0 * u - 1.0);
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double norm_logpdf(double x, double mean, double sd) {
    constexpr double kLog2Pi = 1.8378770664093454836;
    if (sd == 0.0) {
        return x == mean ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
    }
    double z = (x - mean) / sd;
    return -0.5 * (kLog2Pi + z * z) - std::log(sd);
}

}  // namespace mlsmooth
