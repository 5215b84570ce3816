#pragma once

#include "mlsmooth/hmm.hpp"
#include "mlsmooth/optimize.hpp"
#include "mlsmooth/transport.hpp"

namespace mlsmooth {

/// Lag-1 smoother targets in reversed coordinates (x_{p+1}, x_p), so the
/// plain lower-triangular map structure applies directly; the published
/// map acting on (x_p, x_{p+1}) is recovered by permute_conjugate.

/// Initial joint of (x_1, x_0) given y_0, y_1.
TargetDensity build_lag1_target_p0(const HmmInstance& model, double y0,
                                   double y1);

/// Joint of (x_{p+1}, base coordinate of x_p) given a previous-stage map
/// whose first component transports the base to the x_p marginal.
TargetDensity build_lag1_target(const HmmInstance& model,
                                const MonotoneTriangularMap& prev_star,
                                double y_next);

/// Fixed-point targets in coordinate order (x_0, x_{p+1}, x_p) so that the
/// map components are, in order, T^{X_0}, T^1 and T^0 of a plain
/// lower-triangular 3D map.

/// Joint of (x_0, x_2, x_1) given y_1, y_2.
TargetDensity build_fixedpoint_target_p1(const HmmInstance& model, double y1,
                                         double y2);

/// Joint of (base x_0, x_{p+1}, base x_p) where `prev` is the previous
/// stage's 3D map; its second component plays the role of T^1_{p-1}.
TargetDensity build_fixedpoint_target(const HmmInstance& model,
                                      const MonotoneTriangularMap& prev,
                                      double y_next);

}  // namespace mlsmooth
