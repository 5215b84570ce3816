#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mlsmooth/hmm.hpp"

namespace mlsmooth {

/// Filter pass output at time p: filtered moments of X_p given y_{0:p}
/// and predicted moments of X_{p+1} given y_{0:p}.
struct FilterState {
    double m_filt = 0.0;
    double v_filt = 0.0;
    double m_pred = 0.0;
    double v_pred = 0.0;
};

/// Time-0 smoother moment sequence: entry p holds the mean/variance of
/// X_0 given observations up to time p, plus the variance ratio
/// d_p = v_{p|p} / v_{p+1|p} and the smoother gain c_p = alpha * d_p.
struct SmootherMoments {
    std::vector<double> m;
    std::vector<double> v;
    std::vector<double> d;
    std::vector<double> c;
};

/// Standard scalar Kalman filter. When observe_initial is false the
/// observation at index 0 is skipped (records starting at time 1 share the
/// storage slot but carry no information about X_0 directly).
std::vector<FilterState> kalman_filter(const LinearGaussianParams& params,
                                       std::span<const double> obs,
                                       bool observe_initial = true);

/// Backward Rauch-Tung-Striebel pass; returns (mean, variance) per time
/// index, same length as the filter sequence. The gain is the variance
/// ratio c_p = alpha * v_{p|p} / v_{p+1|p}.
std::vector<std::pair<double, double>> rts_smoother(
    const std::vector<FilterState>& filters, const LinearGaussianParams& params);

/// Moments of the time-0 smoother for every horizon p <= up_to, computed by
/// the forward difference recursion
///   m_p - m_{p-1} = alpha^p (m_{p|p} - m_{p|p-1}) prod_{i<p} d_i.
/// Agrees with the time-0 output of rts_smoother at every prefix length.
SmootherMoments fixed_point_moments(const LinearGaussianParams& params,
                                    std::span<const double> obs, int up_to,
                                    bool observe_initial = true);

/// Inverse-CDF coupling of two Gaussians N(m_p, sd_p^2), N(m_pm1, sd_pm1^2)
/// driven by the shared uniform u: returns the pair of quantiles.
std::pair<double, double> gaussian_quantile_coupling(double m_p, double sd_p,
                                                     double m_pm1,
                                                     double sd_pm1, double u);

/// Per-level variance decay rate (alpha + beta^2 / (alpha gamma^2))^{-2}
/// for the linear-Gaussian model, gamma^2 being the (steady-state) filter
/// variance. Throws for alpha == 0.
double theorem3_rate(const LinearGaussianParams& params, double gamma);

/// Fixed point of the scalar filtering Riccati recursion.
double steady_state_filter_variance(const LinearGaussianParams& params);

}  // namespace mlsmooth
