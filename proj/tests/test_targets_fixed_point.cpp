#include <doctest.h>

#include <cmath>
#include <vector>

#include "mlsmooth/fixed_point.hpp"
#include "mlsmooth/hmm.hpp"
#include "mlsmooth/kalman.hpp"
#include "mlsmooth/quadrature.hpp"
#include "mlsmooth/rng.hpp"
#include "mlsmooth/targets.hpp"

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

void check_grad(const TargetDensity& t, Rng& rng, int n_points = 20,
                double tol = 1e-6) {
    std::vector<double> x(t.dim), g(t.dim);
    for (int rep = 0; rep < n_points; ++rep) {
        for (auto& v : x) v = 2.0 * rng.normal();
        t.grad_log(x, g);
        for (int j = 0; j < t.dim; ++j) {
            double h = 1e-6;
            auto xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            double fd = (t.log_unnorm(xp) - t.log_unnorm(xm)) / (2 * h);
            CHECK(std::abs(fd - g[j]) <= tol * std::max(1.0, std::abs(fd)));
        }
    }
}

}  // namespace

TEST_CASE("initial lag-1 target is log-quadratic with the hand hessian") {
    HmmInstance m = make_linear_gaussian(study_params());
    TargetDensity t = build_lag1_target_p0(m, 0.3, -0.6);
    // coordinates (x_1, x_0):
    //   d2/dx1^2 = -(1/beta^2 + 1/tau^2) = -2
    //   d2/dx0^2 = -(1/sigma0^2 + 1/beta^2 + 1/tau^2) = -2.25
    //   cross    = +1
    double h = 1e-4;
    std::vector<double> p00{0.2, -0.4};
    auto at = [&](double d1, double d2) {
        std::vector<double> x{p00[0] + d1, p00[1] + d2};
        return t.log_unnorm(x);
    };
    double h11 = (at(h, 0) - 2 * at(0, 0) + at(-h, 0)) / (h * h);
    double h22 = (at(0, h) - 2 * at(0, 0) + at(0, -h)) / (h * h);
    double h12 =
        (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
    CHECK(h11 == doctest::Approx(-2.0).epsilon(1e-5));
    CHECK(h22 == doctest::Approx(-2.25).epsilon(1e-5));
    CHECK(h12 == doctest::Approx(1.0).epsilon(1e-4));

    Rng rng(1);
    check_grad(t, rng);
}

TEST_CASE("lag-1 recursion target gradient is analytic") {
    HmmInstance m = make_linear_gaussian(study_params());
    MonotoneTriangularMap prev = make_identity_map(2, 3);
    prev.comps[0].a[0] = 0.4;
    prev.comps[0].b[1] = 0.2;
    TargetDensity t = build_lag1_target(m, prev, 0.8);
    Rng rng(2);
    check_grad(t, rng);
}

TEST_CASE("first fixed-point target value matches the plug-in formula") {
    LinearGaussianParams p = study_params();
    HmmInstance m = make_linear_gaussian(p);
    double y1 = 0.5, y2 = -0.3;
    TargetDensity t = build_fixedpoint_target_p1(m, y1, y2);
    // coordinates (x_0, x_2, x_1) at the origin:
    std::vector<double> zero{0.0, 0.0, 0.0};
    double want = m.init_logpdf(0.0) + m.trans_logpdf(0.0, 0.0) +
                  m.trans_logpdf(0.0, 0.0) + m.obs_logpdf(0.0, y1) +
                  m.obs_logpdf(0.0, y2);
    CHECK(t.log_unnorm(zero) == doctest::Approx(want).epsilon(1e-13));
    Rng rng(3);
    check_grad(t, rng);
}

TEST_CASE("fixed-point recursion target gradient is analytic") {
    HmmInstance m = make_linear_gaussian(study_params());
    Rng coeff_rng(4);
    MonotoneTriangularMap prev = make_identity_map(3, 3);
    for (auto& c : prev.comps) {
        for (auto& v : c.a) v += 0.1 * (coeff_rng.uniform01() - 0.5);
        for (auto& v : c.b) v += 0.1 * (coeff_rng.uniform01() - 0.5);
    }
    TargetDensity t = build_fixedpoint_target(m, prev, -0.4);
    Rng rng(5);
    check_grad(t, rng);

    HmmInstance sv = make_stoch_vol(StochVolParams{});
    TargetDensity tsv = build_fixedpoint_target(sv, prev, 0.7);
    Rng rng2(6);
    check_grad(tsv, rng2);
}

TEST_CASE("targets stay finite on the quadrature nodes") {
    HmmInstance m = make_linear_gaussian(study_params());
    auto [traj, obs] = simulate(m, 6, 33);
    QuadratureRule q2 = tensor_normal_quadrature(2, 5);
    TargetDensity t0 = build_lag1_target_p0(m, obs.values[0], obs.values[1]);
    for (const auto& node : q2.nodes) {
        CHECK(std::isfinite(t0.log_unnorm(node)));
    }
    QuadratureRule q3 = tensor_normal_quadrature(3, 5);
    TargetDensity t1 =
        build_fixedpoint_target_p1(m, obs.values[1], obs.values[2]);
    for (const auto& node : q3.nodes) {
        CHECK(std::isfinite(t1.log_unnorm(node)));
    }
}

TEST_CASE("fixed-point pipeline tracks the exact conditional of X_0") {
    LinearGaussianParams p = study_params();
    HmmInstance m = make_linear_gaussian(p);
    auto [traj, obs] = simulate(m, 7, 271828);
    // observations y_1..y_6 (fixed-point convention)
    std::vector<double> obs1(obs.values.begin() + 1, obs.values.begin() + 7);
    int n_star = 5;
    TransportPipeline pipe = build_fixed_point_maps(m, obs1, n_star);
    REQUIRE(static_cast<int>(pipe.stages.size()) == n_star);
    for (const auto& rep : pipe.reports) {
        CHECK(rep.optim.converged);
        // the refit error grows with the stage count at order 3
        CHECK(rep.compose_residual < 5e-2);
    }
    CHECK(pipe.build_ops > 0);

    // Exact posteriors of X_0 given y_{1:p+1}.
    std::vector<double> padded(obs1.size() + 1, 0.0);
    for (std::size_t k = 0; k < obs1.size(); ++k) padded[k + 1] = obs1[k];
    SmootherMoments mom = fixed_point_moments(
        p, padded, static_cast<int>(obs1.size()), false);

    // Push the base law through each composed map by quadrature.
    Quad1D q = gauss_hermite_normal(40);
    for (int stage = 1; stage <= n_star; ++stage) {
        const MonotoneTriangularMap& c = pipe.stages[stage - 1].t_x0;
        double mean = 0.0, second = 0.0;
        for (std::size_t i = 0; i < q.x.size(); ++i) {
            double in[1] = {q.x[i]};
            double v = eval_component(c, 0, in);
            mean += q.w[i] * v;
            second += q.w[i] * v * v;
        }
        double var = second - mean * mean;
        CHECK(std::abs(mean - mom.m[stage + 1]) < 0.05);
        // degree-3 truncation biases the pushforward variance noticeably
        CHECK(std::abs(var - mom.v[stage + 1]) < 0.15);
        // composed maps are monotone increasing
        Rng rng(11);
        for (int i = 0; i < 1000; ++i) {
            std::vector<double> x{rng.normal()};
            CHECK(diag_partial(c, 0, x) > 0.0);
        }
    }
}

TEST_CASE("multilevel transport estimator is deterministic given the seed") {
    LinearGaussianParams p = study_params();
    HmmInstance m = make_linear_gaussian(p);
    LevelSchedule sched = make_schedule(0.25, 0.8, 0.1, 25);
    REQUIRE(sched.n_star >= 1);
    auto [traj, obs] = simulate(m, sched.n_star + 2, 5150);
    std::vector<double> obs1(obs.values.begin() + 1, obs.values.end());
    TransportPipeline pipe =
        build_fixed_point_maps(m, obs1, sched.n_star);
    Rng r1(9, 1), r2(9, 1);
    auto e1 = transport_mlmc_estimate(pipe, sched, [](double x) { return x; }, r1);
    auto e2 = transport_mlmc_estimate(pipe, sched, [](double x) { return x; }, r2);
    CHECK(e1.estimate == e2.estimate);
    CHECK(e1.sample_ops == e2.sample_ops);
}

TEST_CASE("lag-1 chain of maps optimizes stage by stage") {
    LinearGaussianParams p = study_params();
    HmmInstance m = make_linear_gaussian(p);
    auto [traj, obs] = simulate(m, 5, 1618);
    std::vector<StageReport> reports;
    auto maps = build_lag1_maps(m, obs.values, 3, TransportOptions{}, &reports);
    REQUIRE(maps.size() == 4);
    for (const auto& r : reports) CHECK(r.optim.converged);

    // The first component of the stage-p map carries the base to the
    // filter marginal of X_{p+1}.
    auto filt = kalman_filter(p, obs.values);
    Quad1D q = gauss_hermite_normal(40);
    for (int stage = 0; stage <= 3; ++stage) {
        double mean = 0.0, second = 0.0;
        for (std::size_t i = 0; i < q.x.size(); ++i) {
            double in[2] = {q.x[i], 0.0};
            double v = eval_component(maps[stage], 0, in);
            mean += q.w[i] * v;
            second += q.w[i] * v * v;
        }
        double var = second - mean * mean;
        CHECK(std::abs(mean - filt[stage + 1].m_filt) < 0.03);
        CHECK(std::abs(var - filt[stage + 1].v_filt) < 0.05);
    }
}
