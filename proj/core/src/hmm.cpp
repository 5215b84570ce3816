#include "mlsmooth/hmm.hpp"

#include <cmath>
#include <stdexcept>

#include "mlsmooth/special.hpp"

namespace mlsmooth {

HmmInstance make_linear_gaussian(const LinearGaussianParams& p) {
    if (!(p.beta >= 0.0) || !(p.sigma0 >= 0.0) || !(p.tau > 0.0)) {
        throw std::invalid_argument(
            "make_linear_gaussian: requires beta >= 0, sigma0 >= 0, tau > 0");
    }
    HmmInstance h;
    h.dim = 1;
    const double alpha = p.alpha, beta = p.beta, tau = p.tau;
    const double m0 = p.m0, sigma0 = p.sigma0;

    h.init_logpdf = [=](double x) { return norm_logpdf(x, m0, sigma0); };
    h.init_sampler = [=](Rng& rng) { return m0 + sigma0 * rng.normal(); };
    h.trans_logpdf = [=](double x, double xn) {
        return norm_logpdf(xn, alpha * x, beta);
    };
    h.trans_sampler = [=](Rng& rng, double x) {
        return alpha * x + beta * rng.normal();
    };
    h.obs_logpdf = [=](double x, double y) { return norm_logpdf(y, x, tau); };
    h.obs_sampler = [=](Rng& rng, double x) { return x + tau * rng.normal(); };

    h.init_dlogpdf = [=](double x) {
        return sigma0 > 0.0 ? -(x - m0) / (sigma0 * sigma0) : 0.0;
    };
    h.trans_dlogpdf_x = [=](double x, double xn) {
        return beta > 0.0 ? alpha * (xn - alpha * x) / (beta * beta) : 0.0;
    };
    h.trans_dlogpdf_xn = [=](double x, double xn) {
        return beta > 0.0 ? -(xn - alpha * x) / (beta * beta) : 0.0;
    };
    h.obs_dlogpdf_x = [=](double x, double y) { return (y - x) / (tau * tau); };

    // Marginal spread of X_0; generous enough for the time-0 smoother.
    double spread = sigma0 > 0.0 ? sigma0 : 1.0;
    h.domain_lo = m0 - 8.0 * spread;
    h.domain_hi = m0 + 8.0 * spread;
    return h;
}

HmmInstance make_stoch_vol(const StochVolParams& p) {
    if (!(std::abs(p.phi) < 1.0)) {
        throw std::invalid_argument("make_stoch_vol: requires |phi| < 1");
    }
    if (!(p.beta > 0.0)) {
        throw std::invalid_argument("make_stoch_vol: requires beta > 0");
    }
    HmmInstance h;
    h.dim = 1;
    const double mu = p.mu, phi = p.phi, beta = p.beta;
    // Initial law N(mu, 1 / (1 - phi^2)); coincides with the stationary
    // law of the latent AR(1) when beta = 1.
    const double sd0 = 1.0 / std::sqrt(1.0 - phi * phi);

    h.init_logpdf = [=](double x) { return norm_logpdf(x, mu, sd0); };
    h.init_sampler = [=](Rng& rng) { return mu + sd0 * rng.normal(); };
    h.trans_logpdf = [=](double x, double xn) {
        return norm_logpdf(xn, mu + phi * (x - mu), beta);
    };
    h.trans_sampler = [=](Rng& rng, double x) {
        return mu + phi * (x - mu) + beta * rng.normal();
    };
    // Y | x ~ N(0, exp(x)): log density -(log 2pi + x + y^2 exp(-x)) / 2.
    h.obs_logpdf = [](double x, double y) {
        constexpr double kLog2Pi = 1.8378770664093454836;
        return -0.5 * (kLog2Pi + x + y * y * std::exp(-x));
    };
    h.obs_sampler = [](Rng& rng, double x) {
        return rng.normal() * std::exp(0.5 * x);
    };

    h.init_dlogpdf = [=](double x) { return -(x - mu) / (sd0 * sd0); };
    h.trans_dlogpdf_x = [=](double x, double xn) {
        return phi * (xn - mu - phi * (x - mu)) / (beta * beta);
    };
    h.trans_dlogpdf_xn = [=](double x, double xn) {
        return -(xn - mu - phi * (x - mu)) / (beta * beta);
    };
    h.obs_dlogpdf_x = [](double x, double y) {
        return -0.5 * (1.0 - y * y * std::exp(-x));
    };

    h.domain_lo = mu - 8.0 * sd0;
    h.domain_hi = mu + 8.0 * sd0;
    return h;
}

std::pair<Trajectory, ObservationSequence> simulate(const HmmInstance& model,
                                                    int horizon,
                                                    std::uint64_t seed) {
    if (horizon < 0) {
        throw std::invalid_argument("simulate: horizon must be >= 0");
    }
    Trajectory traj;
    ObservationSequence obs;
    traj.seed = obs.seed = seed;
    traj.values.reserve(horizon + 1);
    obs.values.reserve(horizon + 1);

    Rng rng(seed);
    double x = model.init_sampler(rng);
    traj.values.push_back(x);
    obs.values.push_back(model.obs_sampler(rng, x));
    for (int n = 1; n <= horizon; ++n) {
        x = model.trans_sampler(rng, x);
        traj.values.push_back(x);
        obs.values.push_back(model.obs_sampler(rng, x));
    }
    return {std::move(traj), std::move(obs)};
}

}  // namespace mlsmooth
