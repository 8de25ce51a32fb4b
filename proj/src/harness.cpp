#include "mfp/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "mfp/bounds.hpp"
#include "mfp/equilibrium.hpp"
#include "mfp/io.hpp"
#include "mfp/monopoly.hpp"

namespace mfp {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kToolName = "mfprice";
constexpr const char* kToolVersion = "1.0.0";

void apply_workers(int workers) {
#ifdef _OPENMP
    if (workers > 0) omp_set_num_threads(workers);
#else
    (void)workers;
#endif
}

double now_seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// ---- config parsing -------------------------------------------------------

[[noreturn]] void bad_field(const std::string& name, const char* expected) {
    throw std::invalid_argument("config field '" + name + "': expected " + expected);
}

void reject_unknown_keys(const json& obj, const std::string& scope,
                         std::initializer_list<const char*> known) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            if (item.key() == k) ok = true;
        if (!ok)
            throw std::invalid_argument("config: unknown field '" +
                                        (scope.empty() ? item.key() : scope + "." + item.key()) +
                                        "'");
    }
}

double as_number(const json& v, const std::string& name) {
    if (!v.is_number()) bad_field(name, "a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& name) {
    const double d = as_number(v, name);
    if (std::floor(d) != d || std::abs(d) > 2147483647.0) bad_field(name, "an integer");
    return static_cast<int>(d);
}

long as_long(const json& v, const std::string& name) {
    const double d = as_number(v, name);
    if (std::floor(d) != d || std::abs(d) > 9.007199254740992e15) bad_field(name, "an integer");
    return static_cast<long>(d);
}

std::uint64_t as_seed(const json& v, const std::string& name) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const auto s = v.get<std::int64_t>();
        if (s < 0) bad_field(name, "a nonnegative integer");
        return static_cast<std::uint64_t>(s);
    }
    bad_field(name, "a nonnegative integer");
}

void parse_model(const json& obj, ModelParams& m) {
    if (!obj.is_object()) bad_field("model", "an object");
    reject_unknown_keys(obj, "model", {"K", "T", "r", "epsilon", "n_steps", "tol", "max_iters"});
    if (obj.contains("K")) m.K = as_int(obj["K"], "model.K");
    if (obj.contains("T")) m.T = as_number(obj["T"], "model.T");
    if (obj.contains("r")) m.r = as_number(obj["r"], "model.r");
    if (obj.contains("epsilon")) m.epsilon = as_number(obj["epsilon"], "model.epsilon");
    if (obj.contains("n_steps")) m.n_steps = as_int(obj["n_steps"], "model.n_steps");
    if (obj.contains("tol")) m.tol = as_number(obj["tol"], "model.tol");
    if (obj.contains("max_iters")) m.max_iters = as_int(obj["max_iters"], "model.max_iters");
}

json initial_distribution_json(const ExperimentConfig& cfg) {
    if (!cfg.initial_distribution.empty()) return json(cfg.initial_distribution);
    return json(cfg.preset);
}

json model_json(const ModelParams& m) {
    return json{{"K", m.K},         {"T", m.T},
                {"r", m.r},         {"epsilon", m.epsilon},
                {"n_steps", m.n_steps}, {"tol", m.tol},
                {"max_iters", m.max_iters}};
}

json bounds_json(const ModelParams& m) {
    json b;
    b["existence_c1"] = existence_bound(m.K, m.T, m.r);
    b["existence_log10_c1"] = existence_bound_log10(m.K, m.T, m.r);
    const double c2 = uniqueness_bound(m.K);
    if (std::isinf(c2))
        b["uniqueness_c2"] = "unbounded";
    else
        b["uniqueness_c2"] = c2;
    b["monopoly_rho"] = monopoly_constants(m.r).rho;
    return b;
}

void write_manifest(const std::string& output_dir, json manifest) {
    manifest["tool"] = kToolName;
    manifest["version"] = kToolVersion;
    fs::create_directories(output_dir);
    io::write_text_file((fs::path(output_dir) / "manifest.json").string(),
                        manifest.dump(2) + "\n");
}

std::string eps_dir_name(double eps) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "eps_%g", eps);
    return buf;
}

}  // namespace

// ---- ExperimentConfig -----------------------------------------------------

InitialDistribution ExperimentConfig::resolve_initial_distribution() const {
    InitialDistribution M;
    if (!initial_distribution.empty()) {
        if (initial_distribution.size() != static_cast<std::size_t>(model.K) + 1)
            throw std::invalid_argument("initial_distribution: expected K+1 entries");
        M.M = initial_distribution;
    } else if (preset == "bimodal") {
        if (model.K < 54)
            throw std::invalid_argument("initial_distribution: preset 'bimodal' needs K >= 54");
        M.M.assign(static_cast<std::size_t>(model.K) + 1, 0.0);
        for (int k = 20; k <= 24; ++k) M.M[static_cast<std::size_t>(k)] = 0.1;
        for (int k = 50; k <= 54; ++k) M.M[static_cast<std::size_t>(k)] = 0.1;
    } else {
        throw std::invalid_argument("initial_distribution: unknown preset '" + preset + "'");
    }
    M.validate();
    return M;
}

void ExperimentConfig::validate() const {
    model.validate();
    resolve_initial_distribution();
    for (double e : epsilon_sweep)
        if (!(e >= 0.0) || !std::isfinite(e))
            throw std::invalid_argument("epsilon_sweep: entries must be finite and >= 0");
    if (stability && stability->n_guesses < 1)
        throw std::invalid_argument("stability.n_guesses: must be >= 1");
    if (montecarlo && montecarlo->n_firms < 1)
        throw std::invalid_argument("montecarlo.n_firms: must be >= 1");
    if (!(relaxation > 0.0 && relaxation <= 1.0))
        throw std::invalid_argument("relaxation: must be in (0, 1]");
    if (workers < 0) throw std::invalid_argument("workers: must be >= 0");
    if (output_dir.empty()) throw std::invalid_argument("output_dir: must not be empty");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    reject_unknown_keys(j, "",
                        {"model", "initial_distribution", "epsilon_sweep", "stability",
                         "montecarlo", "output_dir", "workers", "relaxation"});

    ExperimentConfig cfg;
    if (j.contains("model")) parse_model(j["model"], cfg.model);
    if (j.contains("initial_distribution")) {
        const json& v = j["initial_distribution"];
        if (v.is_string()) {
            cfg.preset = v.get<std::string>();
        } else if (v.is_array()) {
            cfg.initial_distribution.clear();
            for (std::size_t i = 0; i < v.size(); ++i)
                cfg.initial_distribution.push_back(
                    as_number(v[i], "initial_distribution[" + std::to_string(i) + "]"));
        } else {
            bad_field("initial_distribution", "a preset name or an array of masses");
        }
    }
    if (j.contains("epsilon_sweep")) {
        const json& v = j["epsilon_sweep"];
        if (!v.is_array()) bad_field("epsilon_sweep", "an array of numbers");
        for (std::size_t i = 0; i < v.size(); ++i)
            cfg.epsilon_sweep.push_back(
                as_number(v[i], "epsilon_sweep[" + std::to_string(i) + "]"));
    }
    if (j.contains("stability")) {
        const json& v = j["stability"];
        if (!v.is_object()) bad_field("stability", "an object");
        reject_unknown_keys(v, "stability", {"n_guesses", "seed"});
        StabilityConfig sc;
        if (v.contains("n_guesses")) sc.n_guesses = as_int(v["n_guesses"], "stability.n_guesses");
        if (v.contains("seed")) sc.seed = as_seed(v["seed"], "stability.seed");
        cfg.stability = sc;
    }
    if (j.contains("montecarlo")) {
        const json& v = j["montecarlo"];
        if (!v.is_object()) bad_field("montecarlo", "an object");
        reject_unknown_keys(v, "montecarlo", {"n_firms", "seed", "dt_sim"});
        SimConfig mc;
        if (v.contains("n_firms")) mc.n_firms = as_long(v["n_firms"], "montecarlo.n_firms");
        if (v.contains("seed")) mc.seed = as_seed(v["seed"], "montecarlo.seed");
        if (v.contains("dt_sim")) mc.dt_sim = as_number(v["dt_sim"], "montecarlo.dt_sim");
        cfg.montecarlo = mc;
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) bad_field("output_dir", "a string");
        cfg.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("workers")) cfg.workers = as_int(j["workers"], "workers");
    if (j.contains("relaxation")) cfg.relaxation = as_number(j["relaxation"], "relaxation");
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("config: cannot open file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

// ---- experiments ----------------------------------------------------------

int run_experiment(const ExperimentConfig& config) {
    config.validate();
    const InitialDistribution M = config.resolve_initial_distribution();
    apply_workers(config.workers);
    const auto wall0 = std::chrono::steady_clock::now();

    struct Entry {
        double epsilon = 0.0;
        EquilibriumSolution sol;
        double wall_s = 0.0;
    };
    const std::size_t n_entries = config.epsilon_sweep.size();
    std::vector<Entry> entries(n_entries);
    std::vector<std::exception_ptr> failures(n_entries);

#pragma omp parallel for schedule(dynamic) if (n_entries > 1)
    for (long i = 0; i < static_cast<long>(n_entries); ++i) {
        try {
            const auto t0 = std::chrono::steady_clock::now();
            ModelParams params = config.model;
            params.epsilon = config.epsilon_sweep[static_cast<std::size_t>(i)];
            Entry& e = entries[static_cast<std::size_t>(i)];
            e.epsilon = params.epsilon;
            e.sol = solve_equilibrium(params, M, default_initial_guess(params, M),
                                      config.relaxation);
            e.wall_s = now_seconds_since(t0);
        } catch (...) {
            failures[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    const TimeGrid grid = TimeGrid::uniform(config.model.T, config.model.n_steps);
    const double c1 = existence_bound(config.model.K, config.model.T, config.model.r);
    const double c2 = uniqueness_bound(config.model.K);

    json manifest;
    manifest["command"] = n_entries == 1 ? "solve" : "sweep";
    manifest["model"] = model_json(config.model);
    manifest["initial_distribution"] = initial_distribution_json(config);
    manifest["epsilon_sweep"] = config.epsilon_sweep;
    manifest["relaxation"] = config.relaxation;
    manifest["workers"] = config.workers;
    manifest["output_dir"] = config.output_dir;
    manifest["bounds"] = bounds_json(config.model);

    bool all_converged = true;
    json runs = json::array();
    for (const Entry& e : entries) {
        const fs::path dir = n_entries == 1 ? fs::path(config.output_dir)
                                            : fs::path(config.output_dir) / eps_dir_name(e.epsilon);
        fs::create_directories(dir);
        io::write_value_csv((dir / "value.csv").string(), grid, e.sol.V);
        io::write_distribution_csv((dir / "distribution.csv").string(), grid, e.sol.m);
        io::write_policy_csv((dir / "policy.csv").string(), grid, e.sol.policy);
        io::write_market_csv((dir / "market.csv").string(), grid, e.sol.p_bar, e.sol.m);
        io::write_trace_csv((dir / "trace.csv").string(), e.sol.trace);

        json run;
        run["epsilon"] = e.epsilon;
        run["within_existence_bound"] = e.epsilon <= c1;
        run["within_uniqueness_bound"] = e.epsilon < c2;
        run["converged"] = e.sol.trace.converged;
        run["iterations"] = e.sol.trace.iterations;
        run["final_error"] =
            e.sol.trace.errors.empty() ? 0.0 : e.sol.trace.errors.back();
        run["wall_time_s"] = e.wall_s;
        run["dir"] = dir.string();
        runs.push_back(run);
        all_converged = all_converged && e.sol.trace.converged;

        std::cout << "epsilon = " << fmt6(e.epsilon) << ": "
                  << (e.sol.trace.converged ? "converged" : "NOT converged") << " in "
                  << e.sol.trace.iterations << " iterations (final error "
                  << fmt6(run["final_error"].get<double>()) << ") -> " << dir.string() << "\n";
    }
    manifest["runs"] = runs;
    manifest["wall_time_s"] = now_seconds_since(wall0);
    write_manifest(config.output_dir, manifest);
    return all_converged ? 0 : 2;
}

StabilityReport stability_experiment(const ExperimentConfig& config) {
    config.validate();
    if (!config.stability)
        throw std::invalid_argument("stability: section missing from the configuration");
    const InitialDistribution M = config.resolve_initial_distribution();
    apply_workers(config.workers);

    const StabilityConfig sc = *config.stability;
    const int N = sc.n_guesses;
    std::vector<EquilibriumSolution> sols(static_cast<std::size_t>(N));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(N));

#pragma omp parallel for schedule(dynamic) if (N > 1)
    for (int s = 0; s < N; ++s) {
        try {
            const Guess guess =
                random_initial_guess(config.model, M, sc.seed + static_cast<std::uint64_t>(s));
            sols[static_cast<std::size_t>(s)] =
                solve_equilibrium(config.model, M, guess, config.relaxation);
        } catch (...) {
            failures[static_cast<std::size_t>(s)] = std::current_exception();
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    for (int s = 0; s < N; ++s) {
        const IterationTrace& tr = sols[static_cast<std::size_t>(s)].trace;
        if (!tr.converged)
            throw NonConvergenceError(sc.seed + static_cast<std::uint64_t>(s), tr.iterations,
                                      tr.errors.empty() ? 0.0 : tr.errors.back());
    }

    // Population statistics (divide by N): a single run reports zero spread.
    const auto cv_of_cell = [N](auto value_of_run) {
        double mean = 0.0;
        for (int rr = 0; rr < N; ++rr) mean += value_of_run(rr);
        mean /= N;
        if (std::abs(mean) < 1e-10) return -1.0;
        double var = 0.0;
        for (int rr = 0; rr < N; ++rr) {
            const double d = value_of_run(rr) - mean;
            var += d * d;
        }
        var /= N;
        return std::sqrt(var) / std::abs(mean);
    };

    const std::size_t cols = static_cast<std::size_t>(config.model.n_steps) + 1;
    StabilityReport rep;
    rep.n_runs = N;
    for (std::size_t k = 1; k <= static_cast<std::size_t>(config.model.K); ++k)
        for (std::size_t i = 0; i < cols; ++i) {
            const double cv = cv_of_cell([&](int rr) {
                return sols[static_cast<std::size_t>(rr)].V.v(k, i);
            });
            if (cv > rep.cv_V) rep.cv_V = cv;
        }
    for (std::size_t i = 0; i < cols; ++i) {
        const double cv = cv_of_cell([&](int rr) {
            return sols[static_cast<std::size_t>(rr)].p_bar.values[i];
        });
        if (cv > rep.cv_pbar) rep.cv_pbar = cv;
    }
    for (std::size_t k = 1; k <= static_cast<std::size_t>(config.model.K); ++k)
        for (std::size_t i = 0; i < cols; ++i) {
            const double cv = cv_of_cell([&](int rr) {
                return sols[static_cast<std::size_t>(rr)].m.values(k, i);
            });
            if (cv > rep.cv_m) rep.cv_m = cv;
        }
    return rep;
}

std::string inspect_bounds(int K, double T, double r) {
    const double c1 = existence_bound(K, T, r);
    const double lc1 = existence_bound_log10(K, T, r);
    const double c2 = uniqueness_bound(K);
    const double rho = monopoly_constants(r).rho;

    std::ostringstream os;
    os << "K = " << K << ", T = " << fmt6(T) << ", r = " << fmt6(r) << "\n";
    os << "existence bound   C1 = " << fmt6(c1) << " (log10 = " << fmt6(lc1) << ")\n";
    os << "uniqueness bound  C2 = ";
    if (std::isinf(c2))
        os << "unbounded";
    else
        os << fmt6(c2);
    os << "\n";
    os << "monopoly rate floor rho = " << fmt6(rho) << "\n";
    return os.str();
}

// ---- CLI entry points -----------------------------------------------------

namespace {

int guard(const std::function<int()>& body) {
    try {
        return body();
    } catch (const NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int cmd_solve(ExperimentConfig config) {
    return guard([&config] {
        config.epsilon_sweep.assign(1, config.model.epsilon);
        return run_experiment(config);
    });
}

int cmd_sweep(const ExperimentConfig& config) {
    return guard([&config] { return run_experiment(config); });
}

int cmd_stability(const ExperimentConfig& config) {
    return guard([&config] {
        const auto wall0 = std::chrono::steady_clock::now();
        const StabilityReport rep = stability_experiment(config);
        fs::create_directories(config.output_dir);
        io::write_stability_csv((fs::path(config.output_dir) / "stability.csv").string(),
                                rep.cv_V, rep.cv_pbar, rep.cv_m);

        json manifest;
        manifest["command"] = "stability";
        manifest["model"] = model_json(config.model);
        manifest["initial_distribution"] = initial_distribution_json(config);
        manifest["relaxation"] = config.relaxation;
        manifest["workers"] = config.workers;
        manifest["stability"] = {{"n_guesses", config.stability->n_guesses},
                                 {"seed", config.stability->seed}};
        manifest["report"] = {{"cv_V", rep.cv_V},
                              {"cv_p_bar", rep.cv_pbar},
                              {"cv_m", rep.cv_m},
                              {"n_runs", rep.n_runs}};
        manifest["wall_time_s"] = now_seconds_since(wall0);
        write_manifest(config.output_dir, manifest);

        std::cout << "cv_V = " << fmt6(rep.cv_V) << ", cv_p_bar = " << fmt6(rep.cv_pbar)
                  << ", cv_m = " << fmt6(rep.cv_m) << " over " << rep.n_runs << " runs\n";
        return 0;
    });
}

int cmd_montecarlo(const ExperimentConfig& config) {
    return guard([&config] {
        config.validate();
        if (!config.montecarlo)
            throw std::invalid_argument("montecarlo: section missing from the configuration");
        const InitialDistribution M = config.resolve_initial_distribution();
        apply_workers(config.workers);
        const auto wall0 = std::chrono::steady_clock::now();

        const EquilibriumSolution sol = solve_equilibrium(
            config.model, M, default_initial_guess(config.model, M), config.relaxation);

        json manifest;
        manifest["command"] = "montecarlo";
        manifest["model"] = model_json(config.model);
        manifest["initial_distribution"] = initial_distribution_json(config);
        manifest["relaxation"] = config.relaxation;
        manifest["workers"] = config.workers;
        manifest["montecarlo"] = {{"n_firms", config.montecarlo->n_firms},
                                  {"seed", config.montecarlo->seed},
                                  {"dt_sim", config.montecarlo->dt_sim}};
        manifest["converged"] = sol.trace.converged;
        manifest["iterations"] = sol.trace.iterations;

        if (!sol.trace.converged) {
            manifest["wall_time_s"] = now_seconds_since(wall0);
            write_manifest(config.output_dir, manifest);
            std::cerr << "error: equilibrium did not converge; simulation skipped\n";
            return 2;
        }

        const DistributionPath sim =
            simulate_population(config.model, sol.policy, sol.p_bar, M, *config.montecarlo);
        const double sup = empirical_vs_ode(sim, sol.m);

        const TimeGrid grid = TimeGrid::uniform(config.model.T, config.model.n_steps);
        fs::create_directories(config.output_dir);
        io::write_montecarlo_csv((fs::path(config.output_dir) / "montecarlo.csv").string(),
                                 grid, sol.m, sim);
        manifest["sup_deviation"] = sup;
        manifest["wall_time_s"] = now_seconds_since(wall0);
        write_manifest(config.output_dir, manifest);

        std::cout << "sup |empirical - ode| = " << fmt6(sup) << " over "
                  << config.montecarlo->n_firms << " firms\n";
        return 0;
    });
}

int cmd_bounds(int K, double T, double r) {
    return guard([&] {
        std::cout << inspect_bounds(K, T, r);
        return 0;
    });
}

}  // namespace mfp
