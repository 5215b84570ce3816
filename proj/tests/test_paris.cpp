#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "mlsmooth/hmm.hpp"
#include "mlsmooth/kalman.hpp"
#include "mlsmooth/paris.hpp"

using namespace mlsmooth;

namespace {

LinearGaussianParams study_params() {
    LinearGaussianParams p;
    p.alpha = 1.0;
    p.beta = 1.0;
    p.tau = 1.0;
    p.m0 = 1.0;
    p.sigma0 = 2.0;
    return p;
}

double identity(double x) { return x; }

}  // namespace

TEST_CASE("a single particle just reports its own trajectory start") {
    HmmInstance m = make_linear_gaussian(study_params());
    auto [traj, obs] = simulate(m, 5, 10);
    ParisConfig cfg;
    cfg.n_particles = 1;
    cfg.n_backward = 1;
    Rng rng(44);
    ParisHistory hist;
    ParisResult res =
        paris_fixed_point(m, obs.values, identity, cfg, rng, &hist);
    CHECK(res.estimate == hist.positions[0][0]);
}

TEST_CASE("full backward smoothing equals the paris path at n_backward N") {
    HmmInstance m = make_linear_gaussian(study_params());
    auto [traj, obs] = simulate(m, 8, 20);
    ParisConfig cfg;
    cfg.n_particles = 64;
    cfg.n_backward = 64;
    Rng r1(7, 3), r2(7, 3);
    ParisResult a = paris_fixed_point(m, obs.values, identity, cfg, r1);
    double b = ffbs_reference(m, obs.values, identity, 64, r2);
    CHECK(a.estimate == b);  // bitwise: identical code path and stream
}

TEST_CASE("normalized weights sum to one at every step") {
    HmmInstance m = make_stoch_vol(StochVolParams{});
    auto [traj, obs] = simulate(m, 10, 5);
    ParisConfig cfg;
    cfg.n_particles = 128;
    cfg.n_backward = 2;
    Rng rng(6);
    ParisHistory hist;
    paris_fixed_point(m, obs.values, identity, cfg, rng, &hist);
    REQUIRE(hist.weights.size() == 11);
    for (const auto& w : hist.weights) {
        double s = std::accumulate(w.begin(), w.end(), 0.0);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        for (double v : w) CHECK(v >= 0.0);
    }
}

TEST_CASE("estimate is invariant under particle relabeling") {
    // The estimator is sum_i w_i T_i over the final cloud, an exchangeable
    // statistic; recompute it from a permuted history snapshot.
    HmmInstance m = make_linear_gaussian(study_params());
    auto [traj, obs] = simulate(m, 6, 123);
    ParisConfig cfg;
    cfg.n_particles = 32;
    cfg.n_backward = 32;
    Rng rng(2);
    ParisHistory hist;
    ParisResult res = paris_fixed_point(m, obs.values, identity, cfg, rng, &hist);
    const auto& w = hist.weights.back();
    const auto& t = hist.stats.back();
    double forward = 0.0, backward = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) forward += w[i] * t[i];
    for (std::size_t i = w.size(); i-- > 0;) backward += w[i] * t[i];
    CHECK(res.estimate == doctest::Approx(forward).epsilon(1e-15));
    CHECK(forward == doctest::Approx(backward).epsilon(1e-12));
}

TEST_CASE("paris is deterministic given the seed and counts its cost") {
    HmmInstance m = make_linear_gaussian(study_params());
    auto [traj, obs] = simulate(m, 7, 9);
    ParisConfig cfg;
    cfg.n_particles = 50;
    cfg.n_backward = 2;
    Rng r1(3, 8), r2(3, 8);
    ParisResult a = paris_fixed_point(m, obs.values, identity, cfg, r1);
    ParisResult b = paris_fixed_point(m, obs.values, identity, cfg, r2);
    CHECK(a.estimate == b.estimate);
    // N^2 transition evaluations per assimilated step after the first
    CHECK(a.cost_transition_evals == 50ULL * 50ULL * 7ULL);
}

TEST_CASE("paris concentrates on the exact smoother value") {
    LinearGaussianParams p = study_params();
    HmmInstance m = make_linear_gaussian(p);
    auto [traj, obs] = simulate(m, 10, 777);
    SmootherMoments mom = fixed_point_moments(p, obs.values, 10);
    double want = mom.m[10];

    ParisConfig cfg;
    cfg.n_particles = 256;
    cfg.n_backward = 2;
    const int reps = 30;
    double s = 0.0, s2 = 0.0;
    for (int r = 0; r < reps; ++r) {
        Rng rng(1000, static_cast<std::uint64_t>(r));
        double e = paris_fixed_point(m, obs.values, identity, cfg, rng).estimate;
        s += e;
        s2 += e * e;
    }
    double mean = s / reps;
    double var = (s2 - reps * mean * mean) / (reps - 1);
    double se = std::sqrt(var / reps);
    CHECK(std::abs(mean - want) < 4.0 * se + 0.02);
}

TEST_CASE("invalid configurations are rejected") {
    HmmInstance m = make_linear_gaussian(study_params());
    std::vector<double> obs{0.0};
    Rng rng(1);
    ParisConfig bad;
    bad.n_particles = 4;
    bad.n_backward = 5;
    CHECK_THROWS(paris_fixed_point(m, obs, identity, bad, rng));
    bad.n_particles = 0;
    bad.n_backward = 1;
    CHECK_THROWS(paris_fixed_point(m, obs, identity, bad, rng));
    ParisConfig ok;
    std::vector<double> empty;
    CHECK_THROWS(paris_fixed_point(m, empty, identity, ok, rng));
}
