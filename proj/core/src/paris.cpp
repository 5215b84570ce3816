#include "mlsmooth/paris.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mlsmooth {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Normalizes log-weights in place into probabilities; throws when every
// weight is -inf.
void normalize_logweights(std::vector<double>& logw, std::vector<double>& w) {
    double mx = kNegInf;
    for (double lw : logw) mx = std::max(mx, lw);
    if (mx == kNegInf) {
        throw std::runtime_error("paris: weight collapse, all log-weights -inf");
    }
    double sum = 0.0;
    w.resize(logw.size());
    for (std::size_t i = 0; i < logw.size(); ++i) {
        w[i] = std::exp(logw[i] - mx);
        sum += w[i];
    }
    for (double& v : w) v /= sum;
}

// Leftmost index j with cum[j] >= u.
int inverse_cdf_index(const std::vector<double>& cum, double u) {
    auto it = std::lower_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) return static_cast<int>(cum.size()) - 1;
    return static_cast<int>(it - cum.begin());
}

}  // namespace

ParisResult paris_fixed_point(const HmmInstance& model,
                              std::span<const double> obs,
                              const std::function<double(double)>& phi,
                              const ParisConfig& config, Rng& rng,
                              ParisHistory* history) {
    const int n = config.n_particles;
    const int nb = config.n_backward;
    if (n < 1) throw std::invalid_argument("paris: n_particles must be >= 1");
    if (nb < 1 || nb > n) {
        throw std::invalid_argument("paris: n_backward must be in [1, N]");
    }
    if (obs.empty()) throw std::invalid_argument("paris: empty observations");

    ParisResult res;
    std::vector<double> x(n), logw(n), w(n), stats(n);
    for (int i = 0; i < n; ++i) {
        x[i] = model.init_sampler(rng);
        logw[i] = config.observe_initial ? model.obs_logpdf(x[i], obs[0]) : 0.0;
        stats[i] = phi(x[i]);
    }
    normalize_logweights(logw, w);

    auto record = [&]() {
        if (history) {
            history->positions.push_back(x);
            history->weights.push_back(w);
            history->stats.push_back(stats);
        }
    };
    record();

    std::vector<double> cum(n), xn(n), sn(n), bw(n), bcum(n);
    std::size_t first = config.observe_initial ? 1 : 0;
    for (std::size_t t = first; t < obs.size(); ++t) {
        cum[0] = w[0];
        for (int i = 1; i < n; ++i) cum[i] = cum[i - 1] + w[i];
        cum[n - 1] = 1.0;

        // Multinomial resampling, then propagation through the prior.
        for (int i = 0; i < n; ++i) {
            int a = inverse_cdf_index(cum, rng.uniform01());
            xn[i] = model.trans_sampler(rng, x[a]);
        }

        // Backward statistic update over the pre-resampling cloud.
        for (int i = 0; i < n; ++i) {
            double mx = kNegInf;
            for (int j = 0; j < n; ++j) {
                bw[j] = std::log(w[j]) + model.trans_logpdf(x[j], xn[i]);
                mx = std::max(mx, bw[j]);
            }
            res.cost_transition_evals += static_cast<std::uint64_t>(n);
            if (mx == kNegInf) {
                throw std::runtime_error(
                    "paris: weight collapse in backward weights");
            }
            double sum = 0.0;
            for (int j = 0; j < n; ++j) {
                bw[j] = std::exp(bw[j] - mx);
                sum += bw[j];
            }
            if (nb == n) {
                // Exact backward expectation (full particle smoother).
                double s = 0.0;
                for (int j = 0; j < n; ++j) s += bw[j] * stats[j];
                sn[i] = s / sum;
            } else {
                bcum[0] = bw[0];
                for (int j = 1; j < n; ++j) bcum[j] = bcum[j - 1] + bw[j];
                double s = 0.0;
                for (int k = 0; k < nb; ++k) {
                    int j = inverse_cdf_index(bcum, rng.uniform01() * sum);
                    s += stats[j];
                }
                sn[i] = s / nb;
            }
        }

        x.swap(xn);
        stats.swap(sn);
        for (int i = 0; i < n; ++i) logw[i] = model.obs_logpdf(x[i], obs[t]);
        normalize_logweights(logw, w);
        record();
    }

    double est = 0.0;
    for (int i = 0; i < n; ++i) est += w[i] * stats[i];
    res.estimate = est;
    return res;
}

double ffbs_reference(const HmmInstance& model, std::span<const double> obs,
                      const std::function<double(double)>& phi, int n, Rng& rng,
                      bool observe_initial) {
    ParisConfig cfg;
    cfg.n_particles = n;
    cfg.n_backward = n;
    cfg.observe_initial = observe_initial;
    return paris_fixed_point(model, obs, phi, cfg, rng).estimate;
}

}  // namespace mlsmooth
