#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mlsmooth/grid.hpp"
#include "mlsmooth/special.hpp"

using namespace mlsmooth;

namespace {

GridDensity gaussian_on(const Grid1D& g, double mean, double sd) {
    GridDensity d(g);
    for (int i = 0; i < g.m; ++i) {
        d.w[i] = std::exp(norm_logpdf(g.node(i), mean, sd));
    }
    d.normalize();
    return d;
}

}  // namespace

TEST_CASE("grid construction validates its inputs") {
    CHECK_THROWS_AS(Grid1D(1.0, 0.0, 100), std::invalid_argument);
    CHECK_THROWS_AS(Grid1D(0.0, 1.0, 8), std::invalid_argument);
    Grid1D g(0.0, 1.0, 101);
    CHECK(g.h() == doctest::Approx(0.01));
    CHECK(g.node(100) == doctest::Approx(1.0));
}

TEST_CASE("uniform density has an identity inverse CDF") {
    Grid1D g(0.0, 1.0, 201);
    GridDensity d(g);
    for (int i = 0; i < g.m; ++i) d.w[i] = 1.0;
    d.normalize();
    CHECK(d.integral() == doctest::Approx(1.0).epsilon(1e-12));
    GridCdf cdf = cdf_and_inverse(d);
    CHECK(cdf.c.front() == 0.0);
    CHECK(cdf.c.back() == 1.0);
    for (double u = 0.05; u < 1.0; u += 0.05) {
        CHECK(std::abs(cdf.inverse(u) - u) <= g.h());
    }
}

TEST_CASE("gaussian grid quantiles match the exact quantiles") {
    Grid1D g(-8.0, 8.0, 1601);
    double mean = 0.3, sd = 1.4;
    GridDensity d = gaussian_on(g, mean, sd);
    CHECK(d.mean() == doctest::Approx(mean).epsilon(1e-6));
    CHECK(d.variance() == doctest::Approx(sd * sd).epsilon(1e-6));
    GridCdf cdf = cdf_and_inverse(d);
    CHECK(std::abs(cdf.inverse(0.5) - mean) <= g.h());
    double sup = 0.0;
    for (double u = 0.01; u <= 0.99; u += 0.01) {
        double exact = mean + sd * norm_quantile(u);
        sup = std::max(sup, std::abs(cdf.inverse(u) - exact));
    }
    CHECK(sup < 3.0 * g.h());
}

TEST_CASE("inverse CDF picks the leftmost point of a flat segment") {
    Grid1D g(0.0, 3.0, 31);
    GridDensity d(g);
    // Mass only on [0,1] and [2,3]; the CDF is flat across (1,2).
    for (int i = 0; i < g.m; ++i) {
        double x = g.node(i);
        d.w[i] = (x <= 1.0 || x >= 2.0) ? 1.0 : 0.0;
    }
    d.normalize();
    GridCdf cdf = cdf_and_inverse(d);
    // Under trapezoid integration the CDF first reaches 0.5 one node past
    // the left block, at 1.1, and stays flat until 1.9.
    double mid = cdf.inverse(0.5);
    CHECK(mid == doctest::Approx(1.1).epsilon(1e-9));

    CHECK_THROWS_AS(cdf.inverse(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(cdf.inverse(1.1), std::invalid_argument);
}

TEST_CASE("cdf is monotone nondecreasing") {
    Grid1D g(-6.0, 6.0, 301);
    GridDensity d = gaussian_on(g, -1.0, 0.7);
    GridCdf cdf = cdf_and_inverse(d);
    for (int i = 1; i < g.m; ++i) CHECK(cdf.c[i] >= cdf.c[i - 1]);
    // inverse is comonotone in u
    double prev = -1e300;
    for (double u = 0.0; u <= 1.0; u += 0.01) {
        double x = cdf.inverse(u);
        CHECK(x >= prev);
        prev = x;
    }
}

TEST_CASE("total variation distance on grids") {
    Grid1D g(-10.0, 10.0, 4001);
    GridDensity a = gaussian_on(g, 0.0, 1.0);
    CHECK(tv_distance(a, a) == doctest::Approx(0.0));

    GridDensity b = gaussian_on(g, 0.1, 1.0);
    // TV of N(0,1) vs N(delta,1) is 2 Phi(delta/2) - 1.
    double want = 2.0 * norm_cdf(0.05) - 1.0;
    CHECK(tv_distance(a, b) == doctest::Approx(want).epsilon(1e-4));

    GridDensity left(g), right(g);
    for (int i = 0; i < g.m; ++i) {
        double x = g.node(i);
        left.w[i] = (x < -2.0) ? 1.0 : 0.0;
        right.w[i] = (x > 2.0) ? 1.0 : 0.0;
    }
    left.normalize();
    right.normalize();
    CHECK(tv_distance(left, right) == doctest::Approx(1.0).epsilon(1e-10));

    Grid1D g2(-5.0, 5.0, 101);
    GridDensity other = gaussian_on(g2, 0.0, 1.0);
    CHECK_THROWS_AS(tv_distance(a, other), std::invalid_argument);
}

TEST_CASE("2d density marginalizes and normalizes") {
    Grid1D gx(-5.0, 5.0, 101), gy(-4.0, 4.0, 81);
    GridDensity2D d(gx, gy);
    for (int i = 0; i < gx.m; ++i) {
        for (int j = 0; j < gy.m; ++j) {
            d.at(i, j) = std::exp(norm_logpdf(gx.node(i), 0.5, 1.0) +
                                  norm_logpdf(gy.node(j), -0.5, 0.8));
        }
    }
    d.normalize();
    CHECK(d.integral() == doctest::Approx(1.0).epsilon(1e-12));
    GridDensity mx = d.marginal_x();
    CHECK(mx.integral() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(mx.mean() == doctest::Approx(0.5).epsilon(1e-4));
}
