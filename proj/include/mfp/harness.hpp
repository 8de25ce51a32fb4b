#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfp/montecarlo.hpp"
#include "mfp/types.hpp"

namespace mfp {

struct StabilityConfig {
    int n_guesses = 10;
    std::uint64_t seed = 0;
};

/// Experiment description, loadable from a JSON config file. CLI flags
/// mirror the keys and override file values.
struct ExperimentConfig {
    ModelParams model;

    /// Explicit initial distribution (K+1 masses). When empty, `preset`
    /// names one; "bimodal" puts mass 0.1 uniformly on levels 20..24 and
    /// 50..54.
    std::vector<double> initial_distribution;
    std::string preset = "bimodal";

    std::vector<double> epsilon_sweep;
    std::optional<StabilityConfig> stability;
    std::optional<SimConfig> montecarlo;
    std::string output_dir = "out";
    int workers = 0;         // OpenMP thread cap; 0 keeps the runtime default
    double relaxation = 1.0;

    InitialDistribution resolve_initial_distribution() const;
    void validate() const;

    /// @throws std::invalid_argument naming the offending field.
    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);
};

/// Coefficients of variation across repeated solves from random guesses,
/// sup over levels k >= 1 and grid times (the mean price has no level
/// index). Cells whose sample mean is below 1e-10 in magnitude are excluded
/// (fully drained levels have numerically meaningless ratios).
struct StabilityReport {
    double cv_V = 0.0;
    double cv_pbar = 0.0;
    double cv_m = 0.0;
    int n_runs = 0;
};

/// @brief Solves one equilibrium per sweep entry from the default guess and
/// writes value/distribution/policy/market/trace CSVs plus a JSON manifest
/// (parameters, seeds, iteration traces, bound constants with in/out-of-
/// regime flags, wall time). With a single sweep entry files go directly to
/// output_dir; otherwise each entry writes under output_dir/eps_<value>/.
/// @return 0 when every entry converged, 2 otherwise (recorded in the
/// manifest as converged=false; never thrown).
int run_experiment(const ExperimentConfig& config);

/// @brief Repeated solves from seeded random guesses (seed + 0 .. seed+N-1).
/// @throws NonConvergenceError naming the seed of any non-converged run.
StabilityReport stability_experiment(const ExperimentConfig& config);

/// Text report of the theoretical constants: existence and uniqueness
/// bounds on epsilon (with log10 for the former) and the monopoly rate
/// floor rho.
std::string inspect_bounds(int K, double T, double r);

// CLI entry points (thin wrappers used by the binary; exposed for tests).
// Exit status convention: 0 success, 1 invalid input, 2 non-convergence.
int cmd_solve(ExperimentConfig config);
int cmd_sweep(const ExperimentConfig& config);
int cmd_stability(const ExperimentConfig& config);
int cmd_montecarlo(const ExperimentConfig& config);
int cmd_bounds(int K, double T, double r);

}  // namespace mfp
