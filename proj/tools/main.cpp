// Command line front end: solve / sweep / stability / montecarlo / bounds.
// Flags mirror the JSON config keys; a flag given on the command line
// overrides the value loaded from --config.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mfp/harness.hpp"

namespace {

struct SubOptions {
    CLI::App* sub = nullptr;
    std::string config_path;
    std::string out;
    std::string preset;
    int K = 0;
    double T = 0.0;
    double r = 0.0;
    double epsilon = 0.0;
    int n_steps = 0;
    double tol = 0.0;
    int max_iters = 0;
    double relaxation = 1.0;
    int workers = 0;
    std::uint64_t seed = 0;
    int n_guesses = 0;
    long n_firms = 0;
    double dt_sim = 0.0;
    std::vector<double> sweep;
};

void add_common_options(SubOptions& o) {
    CLI::App* sub = o.sub;
    sub->add_option("--config", o.config_path, "JSON experiment configuration");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--workers", o.workers, "OpenMP thread cap (0 = runtime default)");
    sub->add_option("--K", o.K, "inventory levels (states 0..K)");
    sub->add_option("--T", o.T, "horizon in days");
    sub->add_option("--r", o.r, "discount rate per day");
    sub->add_option("--epsilon", o.epsilon, "competition strength");
    sub->add_option("--n_steps", o.n_steps, "uniform time steps");
    sub->add_option("--tol", o.tol, "fixed-point termination threshold");
    sub->add_option("--max_iters", o.max_iters, "fixed-point iteration cap");
    sub->add_option("--initial_distribution", o.preset, "initial distribution preset name");
    sub->add_option("--relaxation", o.relaxation, "iterate damping factor in (0,1]");
}

bool given(const CLI::App& sub, const std::string& name) {
    const CLI::Option* opt = sub.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

mfp::ExperimentConfig build_config(const SubOptions& o, bool stability_section,
                                   bool montecarlo_section) {
    mfp::ExperimentConfig cfg;
    if (!o.config_path.empty()) cfg = mfp::ExperimentConfig::from_json_file(o.config_path);

    const CLI::App& sub = *o.sub;
    if (given(sub, "--K")) cfg.model.K = o.K;
    if (given(sub, "--T")) cfg.model.T = o.T;
    if (given(sub, "--r")) cfg.model.r = o.r;
    if (given(sub, "--epsilon")) cfg.model.epsilon = o.epsilon;
    if (given(sub, "--n_steps")) cfg.model.n_steps = o.n_steps;
    if (given(sub, "--tol")) cfg.model.tol = o.tol;
    if (given(sub, "--max_iters")) cfg.model.max_iters = o.max_iters;
    if (given(sub, "--initial_distribution")) {
        cfg.preset = o.preset;
        cfg.initial_distribution.clear();
    }
    if (given(sub, "--relaxation")) cfg.relaxation = o.relaxation;
    if (given(sub, "--out")) cfg.output_dir = o.out;
    if (given(sub, "--workers")) cfg.workers = o.workers;
    if (given(sub, "--epsilon_sweep")) cfg.epsilon_sweep = o.sweep;

    if (stability_section) {
        if (!cfg.stability) cfg.stability = mfp::StabilityConfig{};
        if (given(sub, "--seed")) cfg.stability->seed = o.seed;
        if (given(sub, "--n_guesses")) cfg.stability->n_guesses = o.n_guesses;
    }
    if (montecarlo_section) {
        if (!cfg.montecarlo) cfg.montecarlo = mfp::SimConfig{};
        if (given(sub, "--seed")) cfg.montecarlo->seed = o.seed;
        if (given(sub, "--n_firms")) cfg.montecarlo->n_firms = o.n_firms;
        if (given(sub, "--dt_sim")) cfg.montecarlo->dt_sim = o.dt_sim;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-horizon ticket market solver"};
    app.set_version_flag("--version", "mfprice 1.0.0");
    app.require_subcommand(1);

    SubOptions solve_o, sweep_o, stab_o, mc_o;

    solve_o.sub = app.add_subcommand("solve", "solve one market equilibrium");
    add_common_options(solve_o);

    sweep_o.sub = app.add_subcommand("sweep", "solve a sweep over competition strengths");
    add_common_options(sweep_o);
    sweep_o.sub->add_option("--epsilon_sweep", sweep_o.sweep, "comma separated epsilon values")
        ->delimiter(',');

    stab_o.sub = app.add_subcommand("stability",
                                    "repeated solves from seeded random starting points");
    add_common_options(stab_o);
    stab_o.sub->add_option("--seed", stab_o.seed, "base seed (run s uses seed + s)");
    stab_o.sub->add_option("--n_guesses", stab_o.n_guesses, "number of runs");

    mc_o.sub = app.add_subcommand("montecarlo",
                                  "population simulation against the forward solution");
    add_common_options(mc_o);
    mc_o.sub->add_option("--seed", mc_o.seed, "simulation seed");
    mc_o.sub->add_option("--n_firms", mc_o.n_firms, "number of simulated firms");
    mc_o.sub->add_option("--dt_sim", mc_o.dt_sim, "simulation substep (<= 0 selects dt/10)");

    CLI::App* bounds = app.add_subcommand("bounds", "report the theoretical bound constants");
    int bK = 100;
    double bT = 200.0, br = 0.04;
    bounds->add_option("--K", bK, "inventory levels");
    bounds->add_option("--T", bT, "horizon in days");
    bounds->add_option("--r", br, "discount rate per day");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(solve_o.sub)) return mfp::cmd_solve(build_config(solve_o, false, false));
        if (app.got_subcommand(sweep_o.sub)) return mfp::cmd_sweep(build_config(sweep_o, false, false));
        if (app.got_subcommand(stab_o.sub)) return mfp::cmd_stability(build_config(stab_o, true, false));
        if (app.got_subcommand(mc_o.sub)) return mfp::cmd_montecarlo(build_config(mc_o, false, true));
        if (app.got_subcommand(bounds)) return mfp::cmd_bounds(bK, bT, br);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
