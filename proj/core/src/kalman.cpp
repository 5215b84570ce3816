#include "mlsmooth/kalman.hpp"

#include <cmath>
#include <stdexcept>

#include "mlsmooth/special.hpp"

namespace mlsmooth {

namespace {

FilterState update_and_predict(double m_prior, double v_prior, double y,
                               bool observed, const LinearGaussianParams& p) {
    FilterState s;
    if (observed) {
        double t2 = p.tau * p.tau;
        double k = v_prior / (v_prior + t2);  // 0 when v_prior == 0
        s.m_filt = m_prior + k * (y - m_prior);
        s.v_filt = (1.0 - k) * v_prior;
    } else {
        s.m_filt = m_prior;
        s.v_filt = v_prior;
    }
    s.m_pred = p.alpha * s.m_filt;
    s.v_pred = p.alpha * p.alpha * s.v_filt + p.beta * p.beta;
    return s;
}

}  // namespace

std::vector<FilterState> kalman_filter(const LinearGaussianParams& params,
                                       std::span<const double> obs,
                                       bool observe_initial) {
    if (obs.empty()) {
        throw std::invalid_argument("kalman_filter: empty observation sequence");
    }
    std::vector<FilterState> out;
    out.reserve(obs.size());
    double m = params.m0;
    double v = params.sigma0 * params.sigma0;
    for (std::size_t t = 0; t < obs.size(); ++t) {
        bool observed = observe_initial || t > 0;
        FilterState s = update_and_predict(m, v, obs[t], observed, params);
        out.push_back(s);
        m = s.m_pred;
        v = s.v_pred;
    }
    return out;
}

std::vector<std::pair<double, double>> rts_smoother(
    const std::vector<FilterState>& filters,
    const LinearGaussianParams& params) {
    const int n = static_cast<int>(filters.size());
    std::vector<std::pair<double, double>> out(n);
    out[n - 1] = {filters[n - 1].m_filt, filters[n - 1].v_filt};
    for (int p = n - 2; p >= 0; --p) {
        const FilterState& s = filters[p];
        double c = s.v_pred > 0.0 ? params.alpha * s.v_filt / s.v_pred : 0.0;
        double m = s.m_filt + c * (out[p + 1].first - s.m_pred);
        double v = s.v_filt + c * c * (out[p + 1].second - s.v_pred);
        out[p] = {m, v};
    }
    return out;
}

SmootherMoments fixed_point_moments(const LinearGaussianParams& params,
                                    std::span<const double> obs, int up_to,
                                    bool observe_initial) {
    if (up_to < 0 || up_to >= static_cast<int>(obs.size())) {
        throw std::invalid_argument("fixed_point_moments: up_to out of range");
    }
    auto filters = kalman_filter(params, obs, observe_initial);

    SmootherMoments sm;
    sm.m.resize(up_to + 1);
    sm.v.resize(up_to + 1);
    sm.d.resize(up_to + 1);
    sm.c.resize(up_to + 1);

    sm.m[0] = filters[0].m_filt;
    sm.v[0] = filters[0].v_filt;
    double gain_prod = 1.0;  // prod_{i<p} c_i = alpha^p prod_{i<p} d_i
    for (int p = 0; p <= up_to; ++p) {
        const FilterState& s = filters[p];
        sm.d[p] = s.v_pred > 0.0 ? s.v_filt / s.v_pred : 0.0;
        sm.c[p] = params.alpha * sm.d[p];
        if (p > 0) {
            // m_{p|p} - m_{p|p-1} and v_{p|p} - v_{p|p-1}.
            double dm = s.m_filt - filters[p - 1].m_pred;
            double dv = s.v_filt - filters[p - 1].v_pred;
            sm.m[p] = sm.m[p - 1] + gain_prod * dm;
            sm.v[p] = sm.v[p - 1] + gain_prod * gain_prod * dv;
        }
        gain_prod *= sm.c[p];
    }
    return sm;
}

std::pair<double, double> gaussian_quantile_coupling(double m_p, double sd_p,
                                                     double m_pm1,
                                                     double sd_pm1, double u) {
    double z = norm_quantile(u);  // throws for u outside (0, 1)
    return {m_p + sd_p * z, m_pm1 + sd_pm1 * z};
}

double theorem3_rate(const LinearGaussianParams& params, double gamma) {
    if (params.alpha == 0.0) {
        throw std::invalid_argument("theorem3_rate: alpha must be nonzero");
    }
    double base = params.alpha +
                  params.beta * params.beta / (params.alpha * gamma * gamma);
    return 1.0 / (base * base);
}

double steady_state_filter_variance(const LinearGaussianParams& params) {
    double v = params.sigma0 * params.sigma0;
    double t2 = params.tau * params.tau;
    for (int it = 0; it < 10000; ++it) {
        double vp = params.alpha * params.alpha * v + params.beta * params.beta;
        double vn = vp * t2 / (vp + t2);
        if (std::abs(vn - v) < 1e-15) return vn;
        v = vn;
    }
    return v;
}

}  // namespace mlsmooth
