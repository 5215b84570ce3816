#pragma once

#include <vector>

namespace mlsmooth {

/// Uniform grid of m >= 16 nodes on [lo, hi].
struct Grid1D {
    double lo = -1.0;
    double hi = 1.0;
    int m = 16;

    Grid1D() = default;
    Grid1D(double lo_, double hi_, int m_);

    double h() const { return (hi - lo) / (m - 1); }
    double node(int i) const { return lo + i * h(); }
    /// Trapezoid quadrature weight at node i.
    double qw(int i) const { return (i == 0 || i == m - 1) ? 0.5 * h() : h(); }
};

/// Nonnegative density tabulated on a grid; normalized against trapezoid
/// quadrature.
struct GridDensity {
    Grid1D grid;
    std::vector<double> w;

    GridDensity() = default;
    explicit GridDensity(const Grid1D& g) : grid(g), w(g.m, 0.0) {}

    double integral() const;
    /// Scales so integral() == 1; throws if the total mass underflows to 0.
    void normalize();
    double mean() const;
    double variance() const;
};

/// Monotone CDF tabulated on the same nodes, endpoints exactly 0 and 1.
/// inverse() uses the generalized-inverse convention: on flat segments the
/// leftmost point is returned.
struct GridCdf {
    Grid1D grid;
    std::vector<double> c;

    /// Generalized inverse with linear interpolation; u must lie in [0, 1].
    double inverse(double u) const;
};

GridCdf cdf_and_inverse(const GridDensity& d);

/// Total variation distance, 0.5 * trapezoid integral of |d1 - d2|.
/// Both densities must live on the same grid.
double tv_distance(const GridDensity& d1, const GridDensity& d2);

/// Density on a tensor grid, row-major w[ix * gy.m + iy].
struct GridDensity2D {
    Grid1D gx, gy;
    std::vector<double> w;

    GridDensity2D() = default;
    GridDensity2D(const Grid1D& gx_, const Grid1D& gy_)
        : gx(gx_), gy(gy_), w(static_cast<std::size_t>(gx_.m) * gy_.m, 0.0) {}

    double at(int ix, int iy) const { return w[static_cast<std::size_t>(ix) * gy.m + iy]; }
    double& at(int ix, int iy) { return w[static_cast<std::size_t>(ix) * gy.m + iy]; }
    double integral() const;
    void normalize();
    /// Marginal over the second coordinate.
    GridDensity marginal_x() const;
};

}  // namespace mlsmooth
