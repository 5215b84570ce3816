#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "mlsmooth/rng.hpp"

namespace mlsmooth {

/// Scalar linear-Gaussian state-space parameters:
///   X_0 ~ N(m0, sigma0^2), X_n | x_{n-1} ~ N(alpha x_{n-1}, beta^2),
///   Y_n | x_n ~ N(x_n, tau^2).
/// beta and sigma0 may be zero (degenerate point masses), tau must be > 0.
struct LinearGaussianParams {
    double alpha = 1.0;
    double beta = 1.0;
    double tau = 1.0;
    double m0 = 0.0;
    double sigma0 = 1.0;
};

/// Stochastic volatility parameters:
///   X_n = mu + phi (X_{n-1} - mu) + N(0, beta^2),
///   X_0 ~ N(mu, beta^2 / (1 - phi^2)),  Y_n = W_n exp(X_n / 2), W_n ~ N(0,1).
struct StochVolParams {
    double mu = -0.5;
    double phi = 0.95;
    double beta = 0.25;
};

struct Trajectory {
    std::vector<double> values;
    std::uint64_t seed = 0;
};

struct ObservationSequence {
    std::vector<double> values;
    std::uint64_t seed = 0;
};

/// A scalar hidden Markov model given by its initial, transition and
/// observation log-densities, matching samplers, and the log-density
/// derivatives used by gradient-based map fitting. Immutable after
/// construction; samplers take an explicit Rng so instances are safe to
/// share across workers.
struct HmmInstance {
    int dim = 1;

    std::function<double(double)> init_logpdf;
    std::function<double(Rng&)> init_sampler;
    std::function<double(double, double)> trans_logpdf;   // (x, x')
    std::function<double(Rng&, double)> trans_sampler;
    std::function<double(double, double)> obs_logpdf;     // (x, y)
    std::function<double(Rng&, double)> obs_sampler;

    // First derivatives of the log-densities with respect to the state
    // arguments.
    std::function<double(double)> init_dlogpdf;
    std::function<double(double, double)> trans_dlogpdf_x;   // d/dx
    std::function<double(double, double)> trans_dlogpdf_xn;  // d/dx'
    std::function<double(double, double)> obs_dlogpdf_x;     // d/dx

    // Recommended bounded domain for grid-based computation
    // (marginal mean +/- 8 marginal standard deviations).
    double domain_lo = -10.0;
    double domain_hi = 10.0;
};

HmmInstance make_linear_gaussian(const LinearGaussianParams& p);
HmmInstance make_stoch_vol(const StochVolParams& p);

/// Simulates states x_0..x_horizon and observations y_0..y_horizon.
/// Deterministic given the seed.
std::pair<Trajectory, ObservationSequence> simulate(const HmmInstance& model,
                                                    int horizon,
                                                    std::uint64_t seed);

}  // namespace mlsmooth
