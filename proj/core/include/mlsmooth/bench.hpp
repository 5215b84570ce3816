#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mlsmooth/fixed_point.hpp"
#include "mlsmooth/hmm.hpp"
#include "mlsmooth/kalman.hpp"
#include "mlsmooth/schedule.hpp"
#include "mlsmooth/smoother_grid.hpp"

namespace mlsmooth {

struct RunRecord {
    std::string method;
    double epsilon = 0.0;       // 0 for particle-count-driven methods
    long long n_particles = 0;  // 0 for schedule-driven methods
    int replicate = 0;
    double estimate = 0.0;
    double reference = 0.0;
    double sq_error = 0.0;
    std::uint64_t cost_ops = 0;
    double cost_wall_ms = 0.0;
    int n_star = 0;
};

struct ExperimentConfig {
    std::string model = "linear-gaussian";  // or "stoch-vol"
    LinearGaussianParams lg{1.0, 1.0, 1.0, 1.0, 2.0};
    StochVolParams sv;
    // exact-mlmc | grid-mlmc | transport-mlmc | paris | ffbs
    std::string method = "exact-mlmc";
    std::vector<double> epsilons;             // schedule-driven methods
    std::vector<long long> particle_counts;   // paris / ffbs
    double rho = 0.8;
    double delta = 0.1;
    int n_cap = 25;
    int replicates = 1;
    std::uint64_t seed = 1;
    int grid_m = 2001;
    int paris_n_backward = 2;
    int reference_log2_n = 13;  // FFBS reference size for stoch-vol
    // Wall time is recorded only on request so CSV output is byte
    // deterministic by default.
    bool record_wall_time = false;
    TransportOptions transport;
    std::string output;
};

ExperimentConfig load_config(const std::string& path);

/// Exact-Gaussian MLMC backend: level 0 samples the time-0 posterior given
/// y_0, higher levels average quantile-coupled increments of consecutive
/// smoother marginals. cost_ops = n_star + total draws.
EstimateReport mlmc_estimate_exact(const LinearGaussianParams& params,
                                   std::span<const double> obs,
                                   const LevelSchedule& schedule,
                                   const std::function<double(double)>& phi,
                                   Rng& rng);

/// One multilevel-transport run over a prebuilt map pipeline; cost includes
/// the map construction. obs_from_1[k] is the observation at time k+1.
RunRecord run_algorithm1(const TransportPipeline& pipeline,
                         const LevelSchedule& schedule,
                         const std::function<double(double)>& phi,
                         double reference, Rng& rng);

/// Full study over the configured epsilon grid or particle counts;
/// one record per (setting, replicate), deterministic given the seed.
std::vector<RunRecord> run_study(const ExperimentConfig& config);

double mse_against_reference(std::span<const RunRecord> records,
                             double reference);

/// CSV with the fixed header
/// method,epsilon,N,replicate,estimate,reference,sq_error,cost_ops,
/// cost_wall_ms,n_star.
void write_csv(std::ostream& os, std::span<const RunRecord> records);
std::vector<RunRecord> read_csv(std::istream& is);

struct CostFit {
    double a = 0.0;  // coefficient of eps^-2
    double b = 0.0;  // coefficient of -log(eps)
    double r2 = 0.0;
};

/// Least-squares fit of cost(eps) = a eps^-2 + b (-log eps).
CostFit fit_cost_model(std::span<const double> epsilons,
                       std::span<const double> costs);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares of y on x.
SlopeFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace mlsmooth
