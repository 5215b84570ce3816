#include "mlsmooth/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlsmooth {

Grid1D::Grid1D(double lo_, double hi_, int m_) : lo(lo_), hi(hi_), m(m_) {
    if (!(lo < hi)) throw std::invalid_argument("Grid1D: requires lo < hi");
    if (m < 16) throw std::invalid_argument("Grid1D: requires m >= 16");
}

double GridDensity::integral() const {
    double s = 0.0;
    for (int i = 0; i < grid.m; ++i) s += grid.qw(i) * w[i];
    return s;
}

void GridDensity::normalize() {
    double s = integral();
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw std::runtime_error(
            "GridDensity::normalize: mass underflowed; grid too coarse or "
            "domain too wide");
    }
    for (auto& x : w) x /= s;
}

double GridDensity::mean() const {
    double s = 0.0;
    for (int i = 0; i < grid.m; ++i) s += grid.qw(i) * w[i] * grid.node(i);
    return s / integral();
}

double GridDensity::variance() const {
    double mu = mean();
    double s = 0.0;
    for (int i = 0; i < grid.m; ++i) {
        double d = grid.node(i) - mu;
        s += grid.qw(i) * w[i] * d * d;
    }
    return s / integral();
}

GridCdf cdf_and_inverse(const GridDensity& d) {
    GridCdf cdf;
    cdf.grid = d.grid;
    const int m = d.grid.m;
    cdf.c.resize(m);
    cdf.c[0] = 0.0;
    double h = d.grid.h();
    for (int i = 1; i < m; ++i) {
        cdf.c[i] = cdf.c[i - 1] + 0.5 * h * (d.w[i - 1] + d.w[i]);
    }
    double total = cdf.c[m - 1];
    if (!(total > 0.0)) {
        throw std::runtime_error("cdf_and_inverse: density has no mass");
    }
    for (int i = 0; i < m; ++i) cdf.c[i] /= total;
    cdf.c[0] = 0.0;
    cdf.c[m - 1] = 1.0;
    // Cumulative trapezoid of a nonnegative density is nondecreasing by
    // construction; clamp tiny rounding excursions.
    for (int i = 1; i < m; ++i) cdf.c[i] = std::max(cdf.c[i], cdf.c[i - 1]);
    for (int i = 0; i < m; ++i) cdf.c[i] = std::min(cdf.c[i], 1.0);
    return cdf;
}

double GridCdf::inverse(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw std::invalid_argument("GridCdf::inverse: u must be in [0, 1]");
    }
    // Leftmost index with c[i] >= u (generalized inverse).
    auto it = std::lower_bound(c.begin(), c.end(), u);
    int i = static_cast<int>(it - c.begin());
    if (i == 0) return grid.node(0);
    double c0 = c[i - 1], c1 = c[i];
    if (c1 == c0) return grid.node(i);  // flat from the left: leftmost point
    double t = (u - c0) / (c1 - c0);
    return grid.node(i - 1) + t * grid.h();
}

double tv_distance(const GridDensity& d1, const GridDensity& d2) {
    if (d1.grid.m != d2.grid.m || d1.grid.lo != d2.grid.lo ||
        d1.grid.hi != d2.grid.hi) {
        throw std::invalid_argument("tv_distance: grids do not match");
    }
    double s = 0.0;
    for (int i = 0; i < d1.grid.m; ++i) {
        s += d1.grid.qw(i) * std::abs(d1.w[i] - d2.w[i]);
    }
    return 0.5 * s;
}

double GridDensity2D::integral() const {
    double s = 0.0;
    for (int i = 0; i < gx.m; ++i) {
        for (int j = 0; j < gy.m; ++j) s += gx.qw(i) * gy.qw(j) * at(i, j);
    }
    return s;
}

void GridDensity2D::normalize() {
    double s = integral();
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw std::runtime_error("GridDensity2D::normalize: mass underflowed");
    }
    for (auto& x : w) x /= s;
}

GridDensity GridDensity2D::marginal_x() const {
    GridDensity d(gx);
    for (int i = 0; i < gx.m; ++i) {
        double s = 0.0;
        for (int j = 0; j < gy.m; ++j) s += gy.qw(j) * at(i, j);
        d.w[i] = s;
    }
    return d;
}

}  // namespace mlsmooth
