#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlsmooth/bench.hpp"
#include "mlsmooth/hmm.hpp"
#include "mlsmooth/schedule.hpp"

namespace {

mlsmooth::HmmInstance model_from_name(const std::string& name,
                                      const mlsmooth::ExperimentConfig& cfg) {
    if (name == "linear-gaussian") return mlsmooth::make_linear_gaussian(cfg.lg);
    if (name == "stoch-vol") return mlsmooth::make_stoch_vol(cfg.sv);
    throw std::invalid_argument("unknown model: " + name);
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output: " + path);
    return file;
}

int run_simulate(const std::string& model, int horizon, std::uint64_t seed,
                 const std::string& output) {
    mlsmooth::ExperimentConfig defaults;
    mlsmooth::HmmInstance m = model_from_name(model, defaults);
    auto [traj, obs] = mlsmooth::simulate(m, horizon, seed);
    std::ofstream file;
    std::ostream& os = open_output(output, file);
    os.precision(17);
    os << "t,state,observation\n";
    for (std::size_t t = 0; t < traj.values.size(); ++t) {
        os << t << ',' << traj.values[t] << ',' << obs.values[t] << '\n';
    }
    return 0;
}

int run_schedule(double epsilon, double rho, double delta, int n_cap) {
    mlsmooth::LevelSchedule s =
        mlsmooth::make_schedule(epsilon, rho, delta, n_cap);
    std::cout << "n_star," << s.n_star << '\n';
    std::cout << "total_samples," << s.total_samples() << '\n';
    for (int p = 0; p <= s.n_star; ++p) {
        std::cout << "N_" << p << ',' << s.n_samples[p] << '\n';
    }
    return 0;
}

int run_study_cmd(const std::string& config_path, const std::string& method,
                  std::uint64_t seed, bool have_seed,
                  const std::string& output) {
    mlsmooth::ExperimentConfig cfg = mlsmooth::load_config(config_path);
    if (!method.empty()) cfg.method = method;
    if (have_seed) cfg.seed = seed;
    if (!output.empty()) cfg.output = output;
    std::vector<mlsmooth::RunRecord> records = mlsmooth::run_study(cfg);
    std::ofstream file;
    std::ostream& os = open_output(cfg.output, file);
    mlsmooth::write_csv(os, records);
    return 0;
}

int run_fit_cost(const std::string& input) {
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot open input: " + input);
    std::vector<mlsmooth::RunRecord> records = mlsmooth::read_csv(in);
    // Mean cost per epsilon.
    std::map<double, std::pair<double, int>> agg;
    for (const auto& r : records) {
        if (r.epsilon <= 0.0) continue;
        auto& a = agg[r.epsilon];
        a.first += static_cast<double>(r.cost_ops);
        a.second += 1;
    }
    if (agg.size() < 2) {
        throw std::runtime_error("fit-cost: need records at >= 2 epsilons");
    }
    std::vector<double> eps, cost;
    for (const auto& [e, a] : agg) {
        eps.push_back(e);
        cost.push_back(a.first / a.second);
    }
    mlsmooth::CostFit fit = mlsmooth::fit_cost_model(eps, cost);
    std::cout.precision(17);
    std::cout << "a," << fit.a << '\n';
    std::cout << "b," << fit.b << '\n';
    std::cout << "r2," << fit.r2 << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multilevel fixed-point smoothing for hidden Markov models"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Simulate a model trajectory");
    std::string sim_model = "linear-gaussian";
    int sim_horizon = 25;
    std::uint64_t sim_seed = 1;
    std::string sim_output;
    sim->add_option("--model", sim_model, "linear-gaussian | stoch-vol");
    sim->add_option("--horizon", sim_horizon, "last time index");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--output,-o", sim_output, "CSV path (default stdout)");

    auto* sch = app.add_subcommand("schedule", "Print a level schedule");
    double sch_eps = 0.01, sch_rho = 0.8, sch_delta = 0.1;
    int sch_cap = 25;
    sch->add_option("--epsilon", sch_eps, "target accuracy")->required();
    sch->add_option("--rho", sch_rho, "decay rate");
    sch->add_option("--delta", sch_delta, "sample-size exponent offset");
    sch->add_option("--n-cap", sch_cap, "horizon cap");

    auto* run = app.add_subcommand("run", "Run a single configured method");
    auto* study = app.add_subcommand("study", "Run the full configured study");
    std::string cfg_path, cfg_method, cfg_output;
    std::uint64_t cfg_seed = 0;
    bool have_seed = false;
    for (auto* cmd : {run, study}) {
        cmd->add_option("--config,-c", cfg_path, "JSON config path")->required();
        cmd->add_option("--method", cfg_method, "override method selector");
        cmd->add_option("--seed", cfg_seed, "override seed")
            ->each([&](const std::string&) { have_seed = true; });
        cmd->add_option("--output,-o", cfg_output, "CSV path (default stdout)");
    }

    auto* fit = app.add_subcommand("fit-cost", "Fit cost(eps) from a study CSV");
    std::string fit_input;
    fit->add_option("--input,-i", fit_input, "study CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            return run_simulate(sim_model, sim_horizon, sim_seed, sim_output);
        }
        if (sch->parsed()) {
            return run_schedule(sch_eps, sch_rho, sch_delta, sch_cap);
        }
        if (run->parsed() || study->parsed()) {
            return run_study_cmd(cfg_path, cfg_method, cfg_seed, have_seed,
                                 cfg_output);
        }
        if (fit->parsed()) return run_fit_cost(fit_input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
