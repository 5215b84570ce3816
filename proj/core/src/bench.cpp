#include "mlsmooth/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mlsmooth/grid.hpp"
#include "mlsmooth/paris.hpp"

namespace mlsmooth {

namespace {

HmmInstance make_model(const ExperimentConfig& c) {
    if (c.model == "linear-gaussian") return make_linear_gaussian(c.lg);
    if (c.model == "stoch-vol") return make_stoch_vol(c.sv);
    throw std::invalid_argument("unknown model: " + c.model);
}

double identity_phi(double x) { return x; }

double wall_ms_since(std::chrono::steady_clock::time_point t0) {
    auto dt = std::chrono::steady_clock::now() - t0;
    return std::chrono::duration<double, std::milli>(dt).count();
}

// Substream id for (setting, replicate); keeps replicates independent and
// reproducible across methods.
std::uint64_t stream_id(std::size_t setting, int replicate) {
    return setting * 1000003ULL + static_cast<std::uint64_t>(replicate) + 1ULL;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    nlohmann::json j;
    in >> j;
    ExperimentConfig c;
    c.model = j.value("model", c.model);
    c.method = j.value("method", c.method);
    if (j.contains("lg")) {
        const auto& g = j["lg"];
        c.lg.alpha = g.value("alpha", c.lg.alpha);
        c.lg.beta = g.value("beta", c.lg.beta);
        c.lg.tau = g.value("tau", c.lg.tau);
        c.lg.m0 = g.value("m0", c.lg.m0);
        c.lg.sigma0 = g.value("sigma0", c.lg.sigma0);
    }
    if (j.contains("sv")) {
        const auto& s = j["sv"];
        c.sv.mu = s.value("mu", c.sv.mu);
        c.sv.phi = s.value("phi", c.sv.phi);
        c.sv.beta = s.value("beta", c.sv.beta);
    }
    c.epsilons = j.value("epsilons", c.epsilons);
    c.particle_counts = j.value("particle_counts", c.particle_counts);
    c.rho = j.value("rho", c.rho);
    c.delta = j.value("delta", c.delta);
    c.n_cap = j.value("n_cap", c.n_cap);
    c.replicates = j.value("replicates", c.replicates);
    c.seed = j.value("seed", c.seed);
    c.grid_m = j.value("grid_m", c.grid_m);
    c.paris_n_backward = j.value("paris_n_backward", c.paris_n_backward);
    c.reference_log2_n = j.value("reference_log2_n", c.reference_log2_n);
    c.record_wall_time = j.value("record_wall_time", c.record_wall_time);
    if (j.contains("transport")) {
        const auto& t = j["transport"];
        c.transport.o_map = t.value("o_map", c.transport.o_map);
        c.transport.o_exp = t.value("o_exp", c.transport.o_exp);
        c.transport.tol = t.value("tol", c.transport.tol);
    }
    c.output = j.value("output", c.output);
    if (c.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    return c;
}

EstimateReport mlmc_estimate_exact(const LinearGaussianParams& params,
                                   std::span<const double> obs,
                                   const LevelSchedule& schedule,
                                   const std::function<double(double)>& phi,
                                   Rng& rng) {
    const int n_star = schedule.n_star;
    SmootherMoments mom = fixed_point_moments(params, obs, n_star);
    EstimateReport rep;
    rep.level_variance.assign(n_star + 1, 0.0);
    rep.level_n.assign(n_star + 1, 0);
    rep.cost_ops = static_cast<std::uint64_t>(n_star);
    for (int p = 0; p <= n_star; ++p) {
        long long np = schedule.n_samples[p];
        double sum = 0.0, sumsq = 0.0;
        double sd_p = std::sqrt(mom.v[p]);
        double sd_pm1 = p > 0 ? std::sqrt(mom.v[p - 1]) : 0.0;
        for (long long i = 0; i < np; ++i) {
            double z;
            if (p == 0) {
                z = phi(mom.m[0] + sd_p * rng.normal());
            } else {
                auto [xp, xpm1] = gaussian_quantile_coupling(
                    mom.m[p], sd_p, mom.m[p - 1], sd_pm1, rng.uniform01());
                z = phi(xp) - phi(xpm1);
            }
            sum += z;
            sumsq += z * z;
        }
        double nd = static_cast<double>(np);
        double mean = sum / nd;
        rep.estimate += mean;
        rep.level_n[p] = np;
        if (np >= 2) {
            rep.level_variance[p] =
                std::max(0.0, (sumsq - nd * mean * mean) / (nd - 1.0));
        }
        rep.cost_ops += static_cast<std::uint64_t>(np);
    }
    return rep;
}

RunRecord run_algorithm1(const TransportPipeline& pipeline,
                         const LevelSchedule& schedule,
                         const std::function<double(double)>& phi,
                         double reference, Rng& rng) {
    TransportEstimate est = transport_mlmc_estimate(pipeline, schedule, phi, rng);
    RunRecord r;
    r.method = "transport-mlmc";
    r.epsilon = schedule.epsilon;
    r.estimate = est.estimate;
    r.reference = reference;
    r.sq_error = (est.estimate - reference) * (est.estimate - reference);
    r.cost_ops = pipeline.build_ops + est.sample_ops;
    r.n_star = schedule.n_star;
    return r;
}

std::vector<RunRecord> run_study(const ExperimentConfig& config) {
    HmmInstance model = make_model(config);
    const bool is_lg = config.model == "linear-gaussian";
    // One observation record per study; every method and setting slices it.
    auto [traj, obs_all] = simulate(model, config.n_cap + 1, config.seed);
    const std::vector<double>& y = obs_all.values;

    std::vector<RunRecord> out;
    auto push = [&](RunRecord r) { out.push_back(std::move(r)); };

    if (config.method == "paris" || config.method == "ffbs") {
        std::span<const double> obs(y.data(), config.n_cap + 1);
        double reference = 0.0;
        if (is_lg) {
            SmootherMoments mom =
                fixed_point_moments(config.lg, obs, config.n_cap);
            reference = mom.m[config.n_cap];
        } else {
            Rng ref_rng(config.seed, 999999937ULL);
            reference = ffbs_reference(model, obs, identity_phi,
                                       1 << config.reference_log2_n, ref_rng);
        }
        for (std::size_t s = 0; s < config.particle_counts.size(); ++s) {
            long long n = config.particle_counts[s];
            for (int m = 0; m < config.replicates; ++m) {
                Rng rng(config.seed, stream_id(s, m));
                auto t0 = std::chrono::steady_clock::now();
                ParisConfig pc;
                pc.n_particles = static_cast<int>(n);
                pc.n_backward = config.method == "ffbs"
                                    ? static_cast<int>(n)
                                    : std::min<long long>(
                                          config.paris_n_backward, n);
                ParisResult pr =
                    paris_fixed_point(model, obs, identity_phi, pc, rng);
                RunRecord r;
                r.method = config.method;
                r.n_particles = n;
                r.replicate = m;
                r.estimate = pr.estimate;
                r.reference = reference;
                r.sq_error =
                    (pr.estimate - reference) * (pr.estimate - reference);
                r.cost_ops = pr.cost_transition_evals;
                if (config.record_wall_time) r.cost_wall_ms = wall_ms_since(t0);
                r.n_star = config.n_cap;
                push(std::move(r));
            }
        }
        return out;
    }

    // Schedule-driven methods.
    for (std::size_t s = 0; s < config.epsilons.size(); ++s) {
        double eps = config.epsilons[s];
        LevelSchedule sched =
            make_schedule(eps, config.rho, config.delta, config.n_cap);
        int n_star = sched.n_star;

        if (config.method == "exact-mlmc") {
            if (!is_lg) {
                throw std::invalid_argument(
                    "exact-mlmc requires the linear-gaussian model");
            }
            std::span<const double> obs(y.data(), n_star + 1);
            SmootherMoments mom = fixed_point_moments(config.lg, obs, n_star);
            double reference = mom.m[n_star];
            for (int m = 0; m < config.replicates; ++m) {
                Rng rng(config.seed, stream_id(s, m));
                auto t0 = std::chrono::steady_clock::now();
                EstimateReport rep =
                    mlmc_estimate_exact(config.lg, obs, sched, identity_phi, rng);
                RunRecord r;
                r.method = config.method;
                r.epsilon = eps;
                r.replicate = m;
                r.estimate = rep.estimate;
                r.reference = reference;
                r.sq_error =
                    (rep.estimate - reference) * (rep.estimate - reference);
                r.cost_ops = rep.cost_ops;
                if (config.record_wall_time) r.cost_wall_ms = wall_ms_since(t0);
                r.n_star = n_star;
                push(std::move(r));
            }
        } else if (config.method == "grid-mlmc") {
            std::span<const double> obs(y.data(), n_star + 1);
            Grid1D grid(model.domain_lo, model.domain_hi, config.grid_m);
            double reference;
            if (is_lg) {
                SmootherMoments mom =
                    fixed_point_moments(config.lg, obs, n_star);
                reference = mom.m[n_star];
            } else {
                auto marg =
                    smoother_marginal_sequence(model, obs, n_star, grid);
                reference = marg.back().mean();
            }
            for (int m = 0; m < config.replicates; ++m) {
                Rng rng(config.seed, stream_id(s, m));
                auto t0 = std::chrono::steady_clock::now();
                EstimateReport rep = mlmc_estimate_grid(model, obs, sched,
                                                        identity_phi, grid, rng);
                RunRecord r;
                r.method = config.method;
                r.epsilon = eps;
                r.replicate = m;
                r.estimate = rep.estimate;
                r.reference = reference;
                r.sq_error =
                    (rep.estimate - reference) * (rep.estimate - reference);
                r.cost_ops = rep.cost_ops;
                if (config.record_wall_time) r.cost_wall_ms = wall_ms_since(t0);
                r.n_star = n_star;
                push(std::move(r));
            }
        } else if (config.method == "transport-mlmc") {
            // Observations start at time 1; n_star + 1 of them are consumed.
            std::span<const double> obs1(y.data() + 1, n_star + 1);
            TransportPipeline pipeline = build_fixed_point_maps(
                model, obs1, n_star, config.transport);
            double reference;
            if (is_lg) {
                // Filter over times 0..n_star+1 with no observation at 0.
                std::vector<double> padded(n_star + 2, 0.0);
                for (int k = 0; k <= n_star; ++k) padded[k + 1] = obs1[k];
                SmootherMoments mom = fixed_point_moments(
                    config.lg, padded, n_star + 1, false);
                reference = mom.m[n_star + 1];
            } else {
                Rng ref_rng(config.seed, 999999937ULL + s);
                reference =
                    ffbs_reference(model, obs1, identity_phi,
                                   1 << config.reference_log2_n, ref_rng, false);
            }
            for (int m = 0; m < config.replicates; ++m) {
                Rng rng(config.seed, stream_id(s, m));
                auto t0 = std::chrono::steady_clock::now();
                RunRecord r =
                    run_algorithm1(pipeline, sched, identity_phi, reference, rng);
                r.replicate = m;
                if (config.record_wall_time) r.cost_wall_ms = wall_ms_since(t0);
                push(std::move(r));
            }
        } else {
            throw std::invalid_argument("unknown method: " + config.method);
        }
    }
    return out;
}

double mse_against_reference(std::span<const RunRecord> records,
                             double reference) {
    if (records.empty()) {
        throw std::invalid_argument("mse_against_reference: no records");
    }
    double s = 0.0;
    for (const RunRecord& r : records) {
        double d = r.estimate - reference;
        s += d * d;
    }
    return s / static_cast<double>(records.size());
}

void write_csv(std::ostream& os, std::span<const RunRecord> records) {
    os << "method,epsilon,N,replicate,estimate,reference,sq_error,cost_ops,"
          "cost_wall_ms,n_star\n";
    for (const RunRecord& r : records) {
        os << r.method << ',' << format_double(r.epsilon) << ','
           << r.n_particles << ',' << r.replicate << ','
           << format_double(r.estimate) << ',' << format_double(r.reference)
           << ',' << format_double(r.sq_error) << ',' << r.cost_ops << ','
           << format_double(r.cost_wall_ms) << ',' << r.n_star << '\n';
    }
}

std::vector<RunRecord> read_csv(std::istream& is) {
    std::vector<RunRecord> out;
    std::string line;
    if (!std::getline(is, line)) return out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string f;
        RunRecord r;
        std::getline(ls, r.method, ',');
        std::getline(ls, f, ',');
        r.epsilon = std::stod(f);
        std::getline(ls, f, ',');
        r.n_particles = std::stoll(f);
        std::getline(ls, f, ',');
        r.replicate = std::stoi(f);
        std::getline(ls, f, ',');
        r.estimate = std::stod(f);
        std::getline(ls, f, ',');
        r.reference = std::stod(f);
        std::getline(ls, f, ',');
        r.sq_error = std::stod(f);
        std::getline(ls, f, ',');
        r.cost_ops = std::stoull(f);
        std::getline(ls, f, ',');
        r.cost_wall_ms = std::stod(f);
        std::getline(ls, f, ',');
        r.n_star = std::stoi(f);
        out.push_back(std::move(r));
    }
    return out;
}

CostFit fit_cost_model(std::span<const double> epsilons,
                       std::span<const double> costs) {
    if (epsilons.size() != costs.size() || epsilons.size() < 2) {
        throw std::invalid_argument("fit_cost_model: need >= 2 points");
    }
    double suu = 0, suv = 0, svv = 0, suc = 0, svc = 0;
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        double u = 1.0 / (epsilons[i] * epsilons[i]);
        double v = -std::log(epsilons[i]);
        suu += u * u;
        suv += u * v;
        svv += v * v;
        suc += u * costs[i];
        svc += v * costs[i];
    }
    double det = suu * svv - suv * suv;
    if (det == 0.0) throw std::runtime_error("fit_cost_model: singular system");
    CostFit fit;
    fit.a = (svv * suc - suv * svc) / det;
    fit.b = (suu * svc - suv * suc) / det;
    double mean = 0.0;
    for (double c : costs) mean += c;
    mean /= static_cast<double>(costs.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        double u = 1.0 / (epsilons[i] * epsilons[i]);
        double v = -std::log(epsilons[i]);
        double pred = fit.a * u + fit.b * v;
        ss_res += (costs[i] - pred) * (costs[i] - pred);
        ss_tot += (costs[i] - mean) * (costs[i] - mean);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

SlopeFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("fit_line: need >= 2 points");
    }
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::runtime_error("fit_line: degenerate x");
    SlopeFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    double my = sy / n;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double pred = fit.intercept + fit.slope * x[i];
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

}  // namespace mlsmooth
