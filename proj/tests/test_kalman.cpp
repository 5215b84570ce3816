#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mlsmooth/hmm.hpp"
#include "mlsmooth/kalman.hpp"
#include "mlsmooth/special.hpp"

using namespace mlsmooth;

TEST_CASE("single conjugate update halves a unit prior variance") {
    LinearGaussianParams p;
    p.m0 = 0.0;
    p.sigma0 = 1.0;
    p.tau = 1.0;
    std::vector<double> obs{0.0};
    auto f = kalman_filter(p, obs);
    REQUIRE(f.size() == 1);
    CHECK(f[0].m_filt == doctest::Approx(0.0));
    CHECK(f[0].v_filt == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("filter variance converges to the Riccati fixed point") {
    LinearGaussianParams p;  // alpha = beta = tau = 1
    p.sigma0 = 2.0;
    p.m0 = 1.0;
    std::vector<double> obs(60, 0.3);
    auto f = kalman_filter(p, obs);
    double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK(f.back().v_filt == doctest::Approx(golden).epsilon(1e-10));
    CHECK(steady_state_filter_variance(p) ==
          doctest::Approx(golden).epsilon(1e-12));
}

TEST_CASE("degenerate dynamics freeze the filter") {
    LinearGaussianParams p;
    p.alpha = 1.0;
    p.beta = 0.0;
    p.m0 = 2.0;
    p.sigma0 = 0.0;
    std::vector<double> obs{5.0, -1.0, 0.0};
    auto f = kalman_filter(p, obs);
    for (const auto& s : f) {
        CHECK(s.v_filt == 0.0);
        CHECK(s.m_filt == 2.0);
    }
    auto sm = rts_smoother(f, p);
    CHECK(sm.front().first == 2.0);
}

TEST_CASE("smoother over a single observation equals the filter") {
    LinearGaussianParams p;
    p.sigma0 = 2.0;
    std::vector<double> obs{1.7};
    auto f = kalman_filter(p, obs);
    auto sm = rts_smoother(f, p);
    CHECK(sm[0].first == doctest::Approx(f[0].m_filt));
    CHECK(sm[0].second == doctest::Approx(f[0].v_filt));
}

TEST_CASE("fixed-point recursion reproduces the RTS time-0 moments") {
    LinearGaussianParams p;
    p.sigma0 = 2.0;
    p.m0 = 1.0;
    HmmInstance m = make_linear_gaussian(p);
    auto [traj, obs] = simulate(m, 25, 9001);
    SmootherMoments mom = fixed_point_moments(p, obs.values, 25);
    for (int up_to = 0; up_to <= 25; ++up_to) {
        std::vector<double> prefix(obs.values.begin(),
                                   obs.values.begin() + up_to + 1);
        auto f = kalman_filter(p, prefix);
        auto sm = rts_smoother(f, p);
        CHECK(mom.m[up_to] == doctest::Approx(sm[0].first).epsilon(1e-10));
        CHECK(mom.v[up_to] == doctest::Approx(sm[0].second).epsilon(1e-10));
    }
}

TEST_CASE("successive smoother mean increments decay at the theorem rate") {
    LinearGaussianParams p;
    p.sigma0 = 2.0;
    p.m0 = 1.0;
    HmmInstance m = make_linear_gaussian(p);
    auto [traj, obs] = simulate(m, 30, 4242);
    SmootherMoments mom = fixed_point_moments(p, obs.values, 30);
    double gamma2 = steady_state_filter_variance(p);
    double rate = theorem3_rate(p, std::sqrt(gamma2));
    // |m_p - m_{p-1}| shrinks by about sqrt(rate) per step once the filter
    // has settled; average the log-ratio over a late window.
    double acc = 0.0;
    int cnt = 0;
    for (int q = 20; q <= 28; ++q) {
        double r = std::abs(mom.m[q + 1] - mom.m[q]) /
                   std::abs(mom.m[q] - mom.m[q - 1]);
        acc += std::log(r);
        ++cnt;
    }
    double fitted = std::exp(2.0 * acc / cnt);
    CHECK(fitted == doctest::Approx(rate).epsilon(0.25));
}

TEST_CASE("quantile coupling hits the medians and one-sigma quantiles") {
    auto [a, b] = gaussian_quantile_coupling(1.0, 2.0, -1.0, 0.5, 0.5);
    CHECK(a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b == doctest::Approx(-1.0).epsilon(1e-12));
    double u1 = norm_cdf(1.0);
    auto [c, d] = gaussian_quantile_coupling(1.0, 2.0, -1.0, 0.5, u1);
    CHECK(c == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(d == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK_THROWS_AS(gaussian_quantile_coupling(0, 1, 0, 1, 0.0),
                    std::invalid_argument);
}

TEST_CASE("quantile coupling is comonotone and has the closed-form variance") {
    Rng rng(55);
    double m_p = 0.4, sd_p = 1.3, m_q = 0.1, sd_q = 1.1;
    double prev_a = -1e300, prev_b = -1e300;
    for (double u = 0.02; u < 1.0; u += 0.02) {
        auto [a, b] = gaussian_quantile_coupling(m_p, sd_p, m_q, sd_q, u);
        CHECK(a >= prev_a);
        CHECK(b >= prev_b);
        prev_a = a;
        prev_b = b;
    }
    // difference = (m_p - m_q) + (sd_p - sd_q) Z, so Var = (sd_p - sd_q)^2
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        auto [a, b] = gaussian_quantile_coupling(m_p, sd_p, m_q, sd_q,
                                                 rng.uniform01());
        double diff = a - b;
        s += diff;
        s2 += diff * diff;
    }
    double mean = s / n;
    double var = s2 / n - mean * mean;
    double want = (sd_p - sd_q) * (sd_p - sd_q);
    CHECK(mean == doctest::Approx(m_p - m_q).epsilon(0.02));
    CHECK(var == doctest::Approx(want).epsilon(0.05));
}

TEST_CASE("theorem rate values and edge cases") {
    LinearGaussianParams p;  // alpha = beta = 1
    double gamma2 = (std::sqrt(5.0) - 1.0) / 2.0;
    double r = theorem3_rate(p, std::sqrt(gamma2));
    CHECK(r == doctest::Approx(0.145898).epsilon(1e-4));

    LinearGaussianParams small_beta = p;
    small_beta.beta = 1e-9;
    small_beta.alpha = 2.0;
    CHECK(theorem3_rate(small_beta, 1.0) == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(theorem3_rate(p, 1e9) == doctest::Approx(1.0).epsilon(1e-6));

    LinearGaussianParams zero_alpha = p;
    zero_alpha.alpha = 0.0;
    CHECK_THROWS_AS(theorem3_rate(zero_alpha, 1.0), std::invalid_argument);
}

TEST_CASE("filter without an initial observation shifts the record by one") {
    LinearGaussianParams p;
    p.sigma0 = 2.0;
    p.m0 = 1.0;
    // obs[0] is ignored when observe_initial is false; the record then
    // represents y_1.. so the time-0 posterior given k observations matches
    // a chain whose first slot carries no information.
    std::vector<double> obs{999.0, 0.5, -0.2, 1.1};
    SmootherMoments without = fixed_point_moments(p, obs, 3, false);
    CHECK(without.m[0] == doctest::Approx(p.m0));
    CHECK(without.v[0] == doctest::Approx(p.sigma0 * p.sigma0));
}
