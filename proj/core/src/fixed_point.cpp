#include "mlsmooth/fixed_point.hpp"

#include <cmath>
#include <stdexcept>

#include "mlsmooth/quadrature.hpp"

namespace mlsmooth {

namespace {

// The first component of any map in this family depends only on x_1, so
// its coefficient layout coincides with a 1D map of the same order.
MonotoneTriangularMap first_component_as_1d(const MonotoneTriangularMap& m) {
    MonotoneTriangularMap out = make_identity_map(1, m.basis.order);
    out.gl_order = m.gl_order;
    out.comps[0].a = m.comps[0].a;
    out.comps[0].b = m.comps[0].b;
    return out;
}

}  // namespace

TransportPipeline build_fixed_point_maps(const HmmInstance& model,
                                         std::span<const double> obs_from_1,
                                         int n_star,
                                         const TransportOptions& opts) {
    if (n_star < 1) {
        throw std::invalid_argument("build_fixed_point_maps: n_star must be >= 1");
    }
    if (static_cast<int>(obs_from_1.size()) < n_star + 1) {
        throw std::invalid_argument(
            "build_fixed_point_maps: need n_star + 1 observations");
    }
    QuadratureRule quad = tensor_normal_quadrature(3, opts.o_exp);
    Quad1D cq = gauss_hermite_normal(opts.compose_quad_order);
    NewtonOptions newton = opts.newton;
    newton.tol = opts.tol;

    TransportPipeline pipe;
    MonotoneTriangularMap init = make_identity_map(3, opts.o_map);
    for (int p = 1; p <= n_star; ++p) {
        TargetDensity target =
            p == 1 ? build_fixedpoint_target_p1(model, obs_from_1[0],
                                                obs_from_1[1])
                   : build_fixedpoint_target(model, pipe.stages.back().full,
                                             obs_from_1[p]);
        auto [full, rep] = optimize_map(init, target, quad, opts.tol, newton);
        pipe.build_ops += rep.objective_evals * quad.nodes.size();

        StageReport sr;
        sr.p = p;
        sr.optim = rep;

        FixedPointMapPair pair;
        if (p == 1) {
            pair.t_x0 = first_component_as_1d(full);
        } else {
            ComposeResult cr = compose_and_reapproximate(
                pipe.stages.back().t_x0, first_component_as_1d(full), cq);
            pipe.build_ops += cr.report.objective_evals * cq.x.size();
            sr.compose_residual = cr.residual;
            pair.t_x0 = std::move(cr.map);
        }
        init = full;  // warm start for the next stage
        pair.full = std::move(full);
        pipe.stages.push_back(std::move(pair));
        pipe.reports.push_back(sr);
    }
    return pipe;
}

std::vector<MonotoneTriangularMap> build_lag1_maps(
    const HmmInstance& model, std::span<const double> obs_from_0, int up_to,
    const TransportOptions& opts, std::vector<StageReport>* reports) {
    if (up_to < 0) {
        throw std::invalid_argument("build_lag1_maps: up_to must be >= 0");
    }
    if (static_cast<int>(obs_from_0.size()) < up_to + 2) {
        throw std::invalid_argument("build_lag1_maps: need up_to + 2 observations");
    }
    QuadratureRule quad = tensor_normal_quadrature(2, opts.o_exp);
    NewtonOptions newton = opts.newton;
    newton.tol = opts.tol;

    std::vector<MonotoneTriangularMap> maps;
    MonotoneTriangularMap init = make_identity_map(2, opts.o_map);
    for (int p = 0; p <= up_to; ++p) {
        TargetDensity target =
            p == 0 ? build_lag1_target_p0(model, obs_from_0[0], obs_from_0[1])
                   : build_lag1_target(model, maps.back(), obs_from_0[p + 1]);
        auto [map, rep] = optimize_map(init, target, quad, opts.tol, newton);
        if (reports) {
            StageReport sr;
            sr.p = p;
            sr.optim = rep;
            reports->push_back(sr);
        }
        init = map;
        maps.push_back(std::move(map));
    }
    return maps;
}

TransportEstimate transport_mlmc_estimate(
    const TransportPipeline& pipeline, const LevelSchedule& schedule,
    const std::function<double(double)>& phi, Rng& rng) {
    const int n_star = schedule.n_star;
    if (static_cast<int>(pipeline.stages.size()) < n_star) {
        throw std::invalid_argument(
            "transport_mlmc_estimate: pipeline shorter than schedule");
    }
    TransportEstimate out;
    out.level_variance.assign(n_star, 0.0);
    out.level_n.assign(n_star, 0);

    double x[1];
    for (int p = 1; p <= n_star; ++p) {
        std::uint64_t np = schedule.n_samples[p];
        const MonotoneTriangularMap& cur = pipeline.stages[p - 1].t_x0;
        double sum = 0.0, sumsq = 0.0;
        for (std::uint64_t i = 0; i < np; ++i) {
            x[0] = rng.normal();
            double z;
            if (p == 1) {
                z = phi(eval_component(cur, 0, x));
                out.sample_ops += 1;
            } else {
                const MonotoneTriangularMap& prev = pipeline.stages[p - 2].t_x0;
                z = phi(eval_component(cur, 0, x)) -
                    phi(eval_component(prev, 0, x));
                out.sample_ops += 2;
            }
            sum += z;
            sumsq += z * z;
        }
        double mean = sum / static_cast<double>(np);
        out.estimate += mean;
        out.level_n[p - 1] = np;
        if (np >= 2) {
            double nd = static_cast<double>(np);
            out.level_variance[p - 1] =
                std::max(0.0, (sumsq - nd * mean * mean) / (nd - 1.0));
        }
    }
    return out;
}

}  // namespace mlsmooth
