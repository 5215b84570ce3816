#include "mlsmooth/smoother_grid.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlsmooth {

std::vector<GridDensity> smoother_marginal_sequence(
    const HmmInstance& model, std::span<const double> obs, int n_star,
    const Grid1D& grid, std::uint64_t* density_evals) {
    if (model.dim != 1) {
        throw std::invalid_argument("smoother_marginal_sequence: needs dim 1");
    }
    if (static_cast<int>(obs.size()) < n_star + 1) {
        throw std::invalid_argument(
            "smoother_marginal_sequence: needs obs length >= n_star + 1");
    }
    const int m = grid.m;
    std::uint64_t evals = 0;

    // Time-0 posterior proportional to f(x) g(x, y_0). Log-space assembly
    // with max subtraction, then normalized linear weights.
    std::vector<double> logw(m);
    double mx = -1e300;
    for (int i = 0; i < m; ++i) {
        double x = grid.node(i);
        logw[i] = model.init_logpdf(x) + model.obs_logpdf(x, obs[0]);
        mx = std::max(mx, logw[i]);
    }
    evals += 2ULL * m;

    std::vector<GridDensity> out;
    out.reserve(n_star + 1);
    GridDensity d0(grid);
    for (int i = 0; i < m; ++i) d0.w[i] = std::exp(logw[i] - mx);
    d0.normalize();
    out.push_back(d0);
    if (n_star == 0) {
        if (density_evals) *density_evals += evals;
        return out;
    }

    // Transition matrix folded with the source-node quadrature weight:
    // FW[j][k] = qw(j) f(x_j, x_k), row-major.
    std::vector<double> fw(static_cast<std::size_t>(m) * m);
    for (int j = 0; j < m; ++j) {
        double xj = grid.node(j);
        double wj = grid.qw(j);
        for (int k = 0; k < m; ++k) {
            fw[static_cast<std::size_t>(j) * m + k] =
                wj * std::exp(model.trans_logpdf(xj, grid.node(k)));
        }
    }
    evals += static_cast<std::uint64_t>(m) * m;

    // Joint carrier at p = 1: gamma_1(x_0, x_1) = pi_0(x_0) f(x_0, x_1)
    // g(x_1, y_1), then recurse with one matrix product per step.
    std::vector<double> carrier(static_cast<std::size_t>(m) * m);
    std::vector<double> next(static_cast<std::size_t>(m) * m);
    std::vector<double> gobs(m);

    for (int p = 1; p <= n_star; ++p) {
        for (int k = 0; k < m; ++k) {
            gobs[k] = std::exp(model.obs_logpdf(grid.node(k), obs[p]));
        }
        evals += m;
        if (p == 1) {
            for (int i = 0; i < m; ++i) {
                double pi0 = out[0].w[i];
                double xi = grid.node(i);
                for (int k = 0; k < m; ++k) {
                    carrier[static_cast<std::size_t>(i) * m + k] =
                        pi0 * std::exp(model.trans_logpdf(xi, grid.node(k))) *
                        gobs[k];
                }
            }
            evals += static_cast<std::uint64_t>(m) * m;
        } else {
            // next = carrier * FW, then scale columns by the likelihood.
            cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, m, m, m, 1.0,
                        carrier.data(), m, fw.data(), m, 0.0, next.data(), m);
            for (int i = 0; i < m; ++i) {
                double* row = next.data() + static_cast<std::size_t>(i) * m;
                for (int k = 0; k < m; ++k) row[k] *= gobs[k];
            }
            carrier.swap(next);
        }

        // Renormalize the joint so repeated likelihood factors cannot
        // underflow, then marginalize over x_p.
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            const double* row = carrier.data() + static_cast<std::size_t>(i) * m;
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += grid.qw(k) * row[k];
            total += grid.qw(i) * s;
        }
        if (!(total > 0.0) || !std::isfinite(total)) {
            throw std::runtime_error(
                "smoother_marginal_sequence: joint mass underflowed (grid too "
                "coarse)");
        }
        double inv = 1.0 / total;
        for (auto& v : carrier) v *= inv;

        GridDensity d(grid);
        for (int i = 0; i < m; ++i) {
            const double* row = carrier.data() + static_cast<std::size_t>(i) * m;
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += grid.qw(k) * row[k];
            d.w[i] = s;
        }
        d.normalize();
        out.push_back(std::move(d));
    }
    if (density_evals) *density_evals += evals;
    return out;
}

CoupledResult coupled_increment_1d(const GridCdf& cdf_p, const GridCdf& cdf_pm1,
                                   const std::function<double(double)>& phi,
                                   int n, Rng& rng) {
    if (n < 2) throw std::invalid_argument("coupled_increment_1d: needs N >= 2");
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform01();
        double diff = phi(cdf_p.inverse(u)) - phi(cdf_pm1.inverse(u));
        sum += diff;
        sumsq += diff * diff;
    }
    CoupledResult r;
    r.estimate = sum / n;
    r.sample_variance = (sumsq - n * r.estimate * r.estimate) / (n - 1);
    r.sample_variance = std::max(0.0, r.sample_variance);
    return r;
}

double conditional_inverse_2d(const GridDensity2D& d, double x1, double u) {
    const Grid1D& gx = d.gx;
    double t = (x1 - gx.lo) / gx.h();
    int i0 = static_cast<int>(std::floor(t));
    i0 = std::clamp(i0, 0, gx.m - 2);
    double frac = std::clamp(t - i0, 0.0, 1.0);

    GridDensity slice(d.gy);
    for (int j = 0; j < d.gy.m; ++j) {
        slice.w[j] = (1.0 - frac) * d.at(i0, j) + frac * d.at(i0 + 1, j);
    }
    if (!(slice.integral() > 0.0)) {
        throw std::runtime_error(
            "conditional_inverse_2d: degenerate slice with zero mass");
    }
    return cdf_and_inverse(slice).inverse(u);
}

CoupledResult kr_coupled_increment_2d(
    const GridDensity2D& dens_p, const GridDensity2D& dens_pm1,
    const std::function<double(double, double)>& phi, int n, Rng& rng) {
    if (n < 2) {
        throw std::invalid_argument("kr_coupled_increment_2d: needs N >= 2");
    }
    GridCdf marg_p = cdf_and_inverse(dens_p.marginal_x());
    GridCdf marg_pm1 = cdf_and_inverse(dens_pm1.marginal_x());

    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        double u1 = rng.uniform01();
        double u2 = rng.uniform01();
        double a1 = marg_p.inverse(u1);
        double b1 = marg_pm1.inverse(u1);
        double a2 = conditional_inverse_2d(dens_p, a1, u2);
        double b2 = conditional_inverse_2d(dens_pm1, b1, u2);
        double diff = phi(a1, a2) - phi(b1, b2);
        sum += diff;
        sumsq += diff * diff;
    }
    CoupledResult r;
    r.estimate = sum / n;
    r.sample_variance = (sumsq - n * r.estimate * r.estimate) / (n - 1);
    r.sample_variance = std::max(0.0, r.sample_variance);
    return r;
}

EstimateReport mlmc_estimate_grid(const HmmInstance& model,
                                  std::span<const double> obs,
                                  const LevelSchedule& schedule,
                                  const std::function<double(double)>& phi,
                                  const Grid1D& grid, Rng& rng) {
    EstimateReport rep;
    std::uint64_t evals = 0;
    auto marginals =
        smoother_marginal_sequence(model, obs, schedule.n_star, grid, &evals);
    std::vector<GridCdf> cdfs;
    cdfs.reserve(marginals.size());
    for (const auto& d : marginals) cdfs.push_back(cdf_and_inverse(d));

    rep.level_variance.resize(schedule.n_star + 1, 0.0);
    rep.level_n = schedule.n_samples;

    // Level 0: i.i.d. draws from the first marginal.
    {
        long long n0 = schedule.n_samples[0];
        double sum = 0.0, sumsq = 0.0;
        for (long long i = 0; i < n0; ++i) {
            double v = phi(cdfs[0].inverse(rng.uniform01()));
            sum += v;
            sumsq += v * v;
        }
        double mean = sum / n0;
        rep.estimate = mean;
        rep.level_variance[0] =
            n0 > 1 ? std::max(0.0, (sumsq - n0 * mean * mean) / (n0 - 1)) : 0.0;
    }
    for (int p = 1; p <= schedule.n_star; ++p) {
        auto inc = coupled_increment_1d(
            cdfs[p], cdfs[p - 1], phi,
            static_cast<int>(schedule.n_samples[p]), rng);
        rep.estimate += inc.estimate;
        rep.level_variance[p] = inc.sample_variance;
    }
    rep.cost_ops = evals + static_cast<std::uint64_t>(schedule.total_samples());
    return rep;
}

}  // namespace mlsmooth
