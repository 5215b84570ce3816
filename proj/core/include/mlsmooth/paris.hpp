#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mlsmooth/hmm.hpp"
#include "mlsmooth/rng.hpp"

namespace mlsmooth {

struct ParisConfig {
    int n_particles = 256;
    int n_backward = 2;  // number of backward draws per particle
    // When false, time 0 carries no observation and obs[0] is the
    // observation at time 1 (fixed-point convention).
    bool observe_initial = true;
};

struct ParisResult {
    double estimate = 0.0;
    std::uint64_t cost_transition_evals = 0;
};

/// Per-step snapshots of the particle system, recorded when requested so
/// an external backward pass can be run over the same realization.
struct ParisHistory {
    std::vector<std::vector<double>> positions;
    std::vector<std::vector<double>> weights;  // normalized
    std::vector<std::vector<double>> stats;
};

/// Bootstrap particle filter with multinomial resampling at every step,
/// propagating per-particle estimates of E[phi(X_0) | y, X_t = x_i] by
/// backward sampling. With n_backward == n_particles the backward draw is
/// replaced by the exact weighted average, which is the full
/// forward-filtering backward-smoothing update on the same particles.
ParisResult paris_fixed_point(const HmmInstance& model,
                              std::span<const double> obs,
                              const std::function<double(double)>& phi,
                              const ParisConfig& config, Rng& rng,
                              ParisHistory* history = nullptr);

/// Exact particle backward smoothing (O(N^2) per step): the PaRIS update
/// with n_backward = N.
double ffbs_reference(const HmmInstance& model, std::span<const double> obs,
                      const std::function<double(double)>& phi, int n, Rng& rng,
                      bool observe_initial = true);

}  // namespace mlsmooth
