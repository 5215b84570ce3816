#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mlsmooth/grid.hpp"
#include "mlsmooth/rng.hpp"

namespace mlsmooth {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

/// Two-dimensional linear-Gaussian state-space model
///   X_n = A X_{n-1} + N(0, Q),  Y_n = X_n + N(0, R),  X_0 ~ N(mu0, P0).
/// Used to exercise the d = 2 Knothe-Rosenblatt coupling against closed-form
/// smoother marginals.
struct Lg2dParams {
    Mat2 a;
    Mat2 q;
    Mat2 r;
    Vec2 mu0;
    Mat2 p0;
};

struct Gauss2d {
    Vec2 mean;
    Mat2 cov;
};

std::pair<std::vector<Vec2>, std::vector<Vec2>> lg2d_simulate(
    const Lg2dParams& params, int horizon, std::uint64_t seed);

/// Time-0 smoother moments per horizon p = 0..up_to: entry p is the exact
/// Gaussian law of X_0 given y_{0:p} (filter forward, RTS backward).
std::vector<Gauss2d> lg2d_fixed_point_moments(const Lg2dParams& params,
                                              const std::vector<Vec2>& obs,
                                              int up_to);

/// Tabulates a bivariate normal on a tensor grid (normalized).
GridDensity2D gaussian_grid_2d(const Gauss2d& g, const Grid1D& gx,
                               const Grid1D& gy);

}  // namespace mlsmooth
