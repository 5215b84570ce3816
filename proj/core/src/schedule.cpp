#include "mlsmooth/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlsmooth {

long long LevelSchedule::total_samples() const {
    long long s = 0;
    for (long long n : n_samples) s += n;
    return s;
}

LevelSchedule make_schedule(double epsilon, double rho, double delta,
                            int n_cap) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("make_schedule: epsilon must be in (0, 1)");
    }
    if (!(rho > 0.0 && rho < 1.0)) {
        throw std::invalid_argument("make_schedule: rho must be in (0, 1)");
    }
    if (!(delta > 0.0)) {
        throw std::invalid_argument("make_schedule: delta must be > 0");
    }
    LevelSchedule s;
    s.epsilon = epsilon;
    s.rho = rho;
    s.delta = delta;
    s.n_cap = n_cap;
    s.n_star = std::min(
        n_cap,
        static_cast<int>(std::ceil(std::abs(std::log(epsilon) / std::log(rho)))));
    double inv_eps2 = 1.0 / (epsilon * epsilon);
    s.n_samples.resize(s.n_star + 1);
    for (int p = 0; p <= s.n_star; ++p) {
        double n = std::ceil(inv_eps2 * std::pow(p + 1.0, -1.0 - delta));
        s.n_samples[p] = std::max(1LL, static_cast<long long>(n));
    }
    return s;
}

}  // namespace mlsmooth
