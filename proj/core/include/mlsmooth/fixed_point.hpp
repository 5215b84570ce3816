#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mlsmooth/hmm.hpp"
#include "mlsmooth/optimize.hpp"
#include "mlsmooth/rng.hpp"
#include "mlsmooth/schedule.hpp"
#include "mlsmooth/targets.hpp"
#include "mlsmooth/transport.hpp"

namespace mlsmooth {

struct TransportOptions {
    int o_map = 3;
    int o_exp = 5;
    double tol = 1e-4;           // optimizer gradient sup-norm tolerance
    int compose_quad_order = 15; // 1D Gauss-Hermite order for the refit
    NewtonOptions newton;
};

/// Stage-p pair: the 3D map fitted to the stage target and the composed
/// 1D map carrying a base draw to x_0 given y_{1:p+1}.
struct FixedPointMapPair {
    MonotoneTriangularMap t_x0;
    MonotoneTriangularMap full;
};

struct StageReport {
    int p = 0;
    OptimReport optim;
    double compose_residual = 0.0;
};

struct TransportPipeline {
    std::vector<FixedPointMapPair> stages;  // index p-1 holds stage p
    std::vector<StageReport> reports;
    // Target-density evaluations spent building the maps (objective
    // evaluations times quadrature nodes, plus composition refits).
    std::uint64_t build_ops = 0;
};

/// Builds stages p = 1..n_star. obs_from_1[k] is y_{k+1}; at least
/// n_star + 1 observations are required (stage p consumes y_{p+1}).
/// Stage p >= 2 warm-starts from the previous optimum.
TransportPipeline build_fixed_point_maps(const HmmInstance& model,
                                         std::span<const double> obs_from_1,
                                         int n_star,
                                         const TransportOptions& opts = {});

/// Lag-1 chain of 2D maps in reversed coordinates (x_{p+1}, x_p), stages
/// p = 0..up_to; obs_from_0[k] is y_k and up_to + 1 observations are
/// consumed past the initial pair.
std::vector<MonotoneTriangularMap> build_lag1_maps(
    const HmmInstance& model, std::span<const double> obs_from_0, int up_to,
    const TransportOptions& opts = {}, std::vector<StageReport>* reports = nullptr);

struct TransportEstimate {
    double estimate = 0.0;
    std::vector<double> level_variance;  // index p-1 holds level p
    std::vector<std::uint64_t> level_n;
    std::uint64_t sample_ops = 0;  // map-component evaluations while sampling
};

/// Multilevel estimator over the built stages: level 1 is plain transported
/// Monte Carlo through the composed map, level p >= 2 averages coupled
/// differences of consecutive composed maps on shared base draws.
TransportEstimate transport_mlmc_estimate(
    const TransportPipeline& pipeline, const LevelSchedule& schedule,
    const std::function<double(double)>& phi, Rng& rng);

}  // namespace mlsmooth
