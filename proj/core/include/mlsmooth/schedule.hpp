#pragma once

#include <vector>

namespace mlsmooth {

/// Accuracy-driven level schedule: horizon n_star = ceil(|log eps / log rho|)
/// clipped to n_cap, and per-level sample counts
/// N_p = ceil(eps^-2 (p+1)^(-1-delta)) for p = 0..n_star.
struct LevelSchedule {
    double epsilon = 0.0;
    double rho = 0.8;
    double delta = 0.1;
    int n_star = 0;
    int n_cap = 25;
    std::vector<long long> n_samples;

    long long total_samples() const;
};

LevelSchedule make_schedule(double epsilon, double rho = 0.8,
                            double delta = 0.1, int n_cap = 25);

}  // namespace mlsmooth
