#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mlsmooth/grid.hpp"
#include "mlsmooth/hmm.hpp"
#include "mlsmooth/rng.hpp"
#include "mlsmooth/schedule.hpp"

namespace mlsmooth {

/// Deterministic grid computation of the time-0 smoother marginals.
///
/// Carries the joint weights gamma_p(x_0, x_p) on the tensor grid and
/// updates gamma_{p+1}(x_0, x') = [int gamma_p(x_0, x) f(x, x') dx]
/// g(x', y_{p+1}) with trapezoid quadrature, renormalizing after every
/// step, then marginalizes over x_p. Entry p of the result is the time-0
/// marginal given y_{0:p}, for p = 0..n_star.
///
/// density_evals, when given, accumulates the count of transition /
/// observation density evaluations.
std::vector<GridDensity> smoother_marginal_sequence(
    const HmmInstance& model, std::span<const double> obs, int n_star,
    const Grid1D& grid, std::uint64_t* density_evals = nullptr);

struct CoupledResult {
    double estimate = 0.0;
    double sample_variance = 0.0;
};

/// Common-uniform (inverse-CDF) coupling of two tabulated marginals;
/// returns the mean and unbiased sample variance of the phi differences
/// over N shared uniforms. N must be >= 2.
CoupledResult coupled_increment_1d(const GridCdf& cdf_p, const GridCdf& cdf_pm1,
                                   const std::function<double(double)>& phi,
                                   int n, Rng& rng);

/// Knothe-Rosenblatt coupling of two 2D tabulated joints: first coordinate
/// through the marginal inverse CDFs on a shared U1, second through the
/// conditional inverse CDFs at the respective first coordinates on a shared
/// U2. Throws on a conditional slice with no mass.
CoupledResult kr_coupled_increment_2d(
    const GridDensity2D& dens_p, const GridDensity2D& dens_pm1,
    const std::function<double(double, double)>& phi, int n, Rng& rng);

struct EstimateReport {
    double estimate = 0.0;
    std::vector<double> level_variance;
    std::vector<long long> level_n;
    std::uint64_t cost_ops = 0;
};

/// Multilevel estimate of E[phi(X_0) | y_{0:n_star}] from grid marginals:
/// a plain Monte Carlo term at level 0 plus independent coupled increments
/// per level. cost_ops counts density evaluations plus one op per draw.
EstimateReport mlmc_estimate_grid(const HmmInstance& model,
                                  std::span<const double> obs,
                                  const LevelSchedule& schedule,
                                  const std::function<double(double)>& phi,
                                  const Grid1D& grid, Rng& rng);

/// Conditional inverse CDF of the second coordinate given x1 (slices are
/// linearly interpolated between grid rows). Exposed for tests.
double conditional_inverse_2d(const GridDensity2D& d, double x1, double u);

}  // namespace mlsmooth
