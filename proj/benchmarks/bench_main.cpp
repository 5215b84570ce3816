#include <benchmark/benchmark.h>

#include <vector>

#include "mlsmooth/grid.hpp"
#include "mlsmooth/hmm.hpp"
#include "mlsmooth/kalman.hpp"
#include "mlsmooth/optimize.hpp"
#include "mlsmooth/rng.hpp"
#include "mlsmooth/smoother_grid.hpp"
#include "mlsmooth/targets.hpp"
#include "mlsmooth/transport.hpp"

namespace {

using namespace mlsmooth;

LinearGaussianParams lg_params() {
    LinearGaussianParams p;
    p.m0 = 1.0;
    p.sigma0 = 2.0;
    return p;
}

void bm_rng_normal(benchmark::State& state) {
    Rng rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(bm_rng_normal);

void bm_kalman_fixed_point(benchmark::State& state) {
    LinearGaussianParams p = lg_params();
    HmmInstance m = make_linear_gaussian(p);
    auto [traj, obs] = simulate(m, 50, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fixed_point_moments(p, obs.values, 50));
    }
}
BENCHMARK(bm_kalman_fixed_point);

void bm_grid_smoother_step(benchmark::State& state) {
    HmmInstance m = make_linear_gaussian(lg_params());
    auto [traj, obs] = simulate(m, 1, 7);
    Grid1D grid(-12.0, 12.0, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            smoother_marginal_sequence(m, obs.values, 1, grid));
    }
}
BENCHMARK(bm_grid_smoother_step)->Arg(501)->Arg(1001)->Arg(2001);

void bm_map_eval(benchmark::State& state) {
    MonotoneTriangularMap map = make_identity_map(3, 3);
    std::vector<double> x{0.3, -0.7, 1.1};
    for (auto _ : state) benchmark::DoNotOptimize(eval_map(map, x));
}
BENCHMARK(bm_map_eval);

void bm_kl_value_grad(benchmark::State& state) {
    HmmInstance m = make_linear_gaussian(lg_params());
    TargetDensity t = build_lag1_target_p0(m, 0.2, -0.5);
    MonotoneTriangularMap proto = make_identity_map(2, 3);
    KlObjective obj(proto, t, tensor_normal_quadrature(2, 5));
    std::vector<double> theta = pack_coefficients(proto);
    std::vector<double> grad(theta.size());
    for (auto _ : state) benchmark::DoNotOptimize(obj.value_grad(theta, grad));
}
BENCHMARK(bm_kl_value_grad);

}  // namespace

BENCHMARK_MAIN();
