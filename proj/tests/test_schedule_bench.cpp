#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mlsmooth/bench.hpp"
#include "mlsmooth/schedule.hpp"

using namespace mlsmooth;

TEST_CASE("schedule arithmetic matches the level formulas") {
    LevelSchedule s = make_schedule(0.01, 0.8, 0.1, 25);
    CHECK(s.n_star == 21);  // ceil(4.60517 / 0.22314)
    CHECK(static_cast<int>(s.n_samples.size()) == s.n_star + 1);
    CHECK(s.n_samples[0] == 10000);  // ceil(eps^-2 * 1)
    for (std::size_t p = 1; p < s.n_samples.size(); ++p) {
        CHECK(s.n_samples[p] <= s.n_samples[p - 1]);
        CHECK(s.n_samples[p] >= 1);
    }
}

TEST_CASE("delta to zero reproduces N_1 = 1250 at eps 0.02") {
    LevelSchedule s = make_schedule(0.02, 0.8, 1e-12, 25);
    CHECK(s.n_samples[1] == 1250);  // ceil(2500 / 2)
}

TEST_CASE("schedule caps the horizon and validates epsilon") {
    LevelSchedule s = make_schedule(0.0001, 0.8, 0.1, 25);
    CHECK(s.n_star == 25);
    CHECK_THROWS_AS(make_schedule(1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_schedule(0.01, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(make_schedule(0.01, 0.8, -1.0), std::invalid_argument);
}

TEST_CASE("mse against a reference") {
    std::vector<RunRecord> recs(4);
    for (auto& r : recs) r.estimate = 2.0;
    CHECK(mse_against_reference(recs, 2.0) == 0.0);
    recs[0].estimate = 3.0;
    recs[1].estimate = 1.0;
    recs[2].estimate = 3.0;
    recs[3].estimate = 1.0;
    CHECK(mse_against_reference(recs, 2.0) == doctest::Approx(1.0));

    // Ten synthetic rows checked against a spreadsheet-style hand sum.
    std::vector<RunRecord> ten(10);
    double sum = 0.0;
    for (int i = 0; i < 10; ++i) {
        ten[i].estimate = 0.1 * i;
        double d = 0.1 * i - 0.45;
        sum += d * d;
    }
    CHECK(mse_against_reference(ten, 0.45) == doctest::Approx(sum / 10.0));
}

TEST_CASE("csv writing and reading round-trip") {
    std::vector<RunRecord> recs(2);
    recs[0].method = "exact-mlmc";
    recs[0].epsilon = 0.01;
    recs[0].replicate = 0;
    recs[0].estimate = 1.2345678901234567;
    recs[0].reference = 1.2;
    recs[0].sq_error = 0.0011;
    recs[0].cost_ops = 12345;
    recs[0].n_star = 21;
    recs[1] = recs[0];
    recs[1].replicate = 1;
    recs[1].method = "paris";
    recs[1].epsilon = 0.0;
    recs[1].n_particles = 512;

    std::ostringstream os;
    write_csv(os, recs);
    std::string text = os.str();
    CHECK(text.rfind("method,epsilon,N,replicate,estimate,reference,sq_error,"
                     "cost_ops,cost_wall_ms,n_star\n", 0) == 0);

    std::istringstream is(text);
    auto back = read_csv(is);
    REQUIRE(back.size() == 2);
    CHECK(back[0].estimate == recs[0].estimate);
    CHECK(back[1].n_particles == 512);
    CHECK(back[1].method == "paris");
}

TEST_CASE("line fit recovers an exact line") {
    std::vector<double> x{1, 2, 3, 4, 5}, y;
    for (double v : x) y.push_back(3.0 - 2.0 * v);
    SlopeFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cost fit recovers exact coefficients") {
    std::vector<double> eps{0.02, 0.01, 0.005, 0.002, 0.001};
    std::vector<double> cost;
    for (double e : eps) cost.push_back(3.0 / (e * e) + 2.0 * (-std::log(e)));
    CostFit f = fit_cost_model(eps, cost);
    CHECK(f.a == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(f.b == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a single-setting single-replicate study yields one row") {
    ExperimentConfig cfg;
    cfg.method = "exact-mlmc";
    cfg.epsilons = {0.05};
    cfg.replicates = 1;
    cfg.seed = 5;
    auto recs = run_study(cfg);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].method == "exact-mlmc");
    CHECK(recs[0].epsilon == 0.05);
    CHECK(recs[0].cost_ops > 0);
    CHECK(recs[0].cost_wall_ms == 0.0);
}

TEST_CASE("studies are byte-deterministic given the seed") {
    ExperimentConfig cfg;
    cfg.method = "exact-mlmc";
    cfg.epsilons = {0.05, 0.02};
    cfg.replicates = 3;
    cfg.seed = 123;
    std::ostringstream a, b;
    write_csv(a, run_study(cfg));
    write_csv(b, run_study(cfg));
    CHECK(a.str() == b.str());
    cfg.seed = 124;
    std::ostringstream c;
    write_csv(c, run_study(cfg));
    CHECK(a.str() != c.str());
}

TEST_CASE("exact backend is unbiased across replicates") {
    ExperimentConfig cfg;
    cfg.method = "exact-mlmc";
    cfg.epsilons = {0.1};
    cfg.replicates = 1000;
    cfg.seed = 999;
    auto recs = run_study(cfg);
    double mean = 0.0;
    for (const auto& r : recs) mean += r.estimate;
    mean /= static_cast<double>(recs.size());
    double var = 0.0;
    for (const auto& r : recs) {
        var += (r.estimate - mean) * (r.estimate - mean);
    }
    var /= static_cast<double>(recs.size() - 1);
    double se = std::sqrt(var / static_cast<double>(recs.size()));
    CHECK(std::abs(mean - recs[0].reference) < 4.0 * se);
}
