#include "mlsmooth/targets.hpp"

#include <array>
#include <cmath>

namespace mlsmooth {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

}  // namespace

TargetDensity build_lag1_target_p0(const HmmInstance& model, double y0,
                                   double y1) {
    TargetDensity t;
    t.dim = 2;
    auto init = model.init_logpdf;
    auto trans = model.trans_logpdf;
    auto obs = model.obs_logpdf;
    t.log_unnorm = [init, trans, obs, y0, y1](std::span<const double> z) {
        // z = (x_1, x_0)
        return init(z[1]) + trans(z[1], z[0]) + obs(z[1], y0) + obs(z[0], y1);
    };
    auto dinit = model.init_dlogpdf;
    auto dtx = model.trans_dlogpdf_x;
    auto dtxn = model.trans_dlogpdf_xn;
    auto dobs = model.obs_dlogpdf_x;
    t.grad_log = [dinit, dtx, dtxn, dobs, y0, y1](std::span<const double> z,
                                                  std::span<double> g) {
        g[0] = dtxn(z[1], z[0]) + dobs(z[0], y1);
        g[1] = dinit(z[1]) + dtx(z[1], z[0]) + dobs(z[1], y0);
    };
    return t;
}

TargetDensity build_lag1_target(const HmmInstance& model,
                                const MonotoneTriangularMap& prev_star,
                                double y_next) {
    TargetDensity t;
    t.dim = 2;
    auto trans = model.trans_logpdf;
    auto obs = model.obs_logpdf;
    MonotoneTriangularMap prev = prev_star;
    t.log_unnorm = [trans, obs, prev, y_next](std::span<const double> z) {
        // z = (x_{p+1}, base coordinate of x_p)
        std::array<double, 2> in{z[1], 0.0};
        double xp = eval_component(prev, 0, in);
        return -0.5 * (z[1] * z[1] + kLog2Pi) + trans(xp, z[0]) +
               obs(z[0], y_next);
    };
    auto dtx = model.trans_dlogpdf_x;
    auto dtxn = model.trans_dlogpdf_xn;
    auto dobs = model.obs_dlogpdf_x;
    t.grad_log = [dtx, dtxn, dobs, prev, y_next](std::span<const double> z,
                                                 std::span<double> g) {
        std::array<double, 2> in{z[1], 0.0};
        double xp = eval_component(prev, 0, in);
        double dxp = diag_partial(prev, 0, in);
        g[0] = dtxn(xp, z[0]) + dobs(z[0], y_next);
        g[1] = -z[1] + dtx(xp, z[0]) * dxp;
    };
    return t;
}

TargetDensity build_fixedpoint_target_p1(const HmmInstance& model, double y1,
                                         double y2) {
    TargetDensity t;
    t.dim = 3;
    auto init = model.init_logpdf;
    auto trans = model.trans_logpdf;
    auto obs = model.obs_logpdf;
    t.log_unnorm = [init, trans, obs, y1, y2](std::span<const double> z) {
        // z = (x_0, x_2, x_1)
        return init(z[0]) + trans(z[0], z[2]) + trans(z[2], z[1]) +
               obs(z[2], y1) + obs(z[1], y2);
    };
    auto dinit = model.init_dlogpdf;
    auto dtx = model.trans_dlogpdf_x;
    auto dtxn = model.trans_dlogpdf_xn;
    auto dobs = model.obs_dlogpdf_x;
    t.grad_log = [dinit, dtx, dtxn, dobs, y1, y2](std::span<const double> z,
                                                  std::span<double> g) {
        g[0] = dinit(z[0]) + dtx(z[0], z[2]);
        g[1] = dtxn(z[2], z[1]) + dobs(z[1], y2);
        g[2] = dtxn(z[0], z[2]) + dtx(z[2], z[1]) + dobs(z[2], y1);
    };
    return t;
}

TargetDensity build_fixedpoint_target(const HmmInstance& model,
                                      const MonotoneTriangularMap& prev,
                                      double y_next) {
    TargetDensity t;
    t.dim = 3;
    auto trans = model.trans_logpdf;
    auto obs = model.obs_logpdf;
    MonotoneTriangularMap pm = prev;
    t.log_unnorm = [trans, obs, pm, y_next](std::span<const double> z) {
        // z = (base x_0, x_{p+1}, base x_p); the previous map's second
        // component carries (base x_0, base x_p) to the x_p marginal.
        std::array<double, 3> in{z[0], z[2], 0.0};
        double xp = eval_component(pm, 1, in);
        return -0.5 * (z[0] * z[0] + z[2] * z[2] + 2.0 * kLog2Pi) +
               trans(xp, z[1]) + obs(z[1], y_next);
    };
    auto dtx = model.trans_dlogpdf_x;
    auto dtxn = model.trans_dlogpdf_xn;
    auto dobs = model.obs_dlogpdf_x;
    t.grad_log = [dtx, dtxn, dobs, pm, y_next](std::span<const double> z,
                                               std::span<double> g) {
        std::array<double, 3> in{z[0], z[2], 0.0};
        double xp = eval_component(pm, 1, in);
        double d0 = component_partial(pm, 1, in, 0);
        double d2 = diag_partial(pm, 1, in);
        double dlt = dtx(xp, z[1]);
        g[0] = -z[0] + dlt * d0;
        g[1] = dtxn(xp, z[1]) + dobs(z[1], y_next);
        g[2] = -z[2] + dlt * d2;
    };
    return t;
}

}  // namespace mlsmooth
