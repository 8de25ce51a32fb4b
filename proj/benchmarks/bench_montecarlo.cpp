// Times the threaded population simulation against the serial reference on
// an identical workload and confirms the two produce bitwise equal output.
//
//   bench_montecarlo [n_firms] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mfp/equilibrium.hpp"
#include "mfp/harness.hpp"
#include "mfp/model.hpp"
#include "mfp/montecarlo.hpp"

using namespace mfp;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F>
double best_of(int repeats, F&& f) {
    double best = 1e300;
    for (int rep = 0; rep < repeats; ++rep) {
        const double t0 = now_seconds();
        f();
        best = std::min(best, now_seconds() - t0);
    }
    return best;
}

bool identical(const DistributionPath& a, const DistributionPath& b) {
    if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols()) return false;
    for (std::size_t k = 0; k < a.values.rows(); ++k)
        for (std::size_t i = 0; i < a.values.cols(); ++i)
            if (a.values(k, i) != b.values(k, i)) return false;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    SimConfig sim;
    sim.n_firms = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 200000;
    sim.seed = 42;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;

    ModelParams params;
    params.epsilon = 0.4;
    ExperimentConfig cfg;
    cfg.model = params;
    const InitialDistribution M = cfg.resolve_initial_distribution();

    std::printf("solving the equilibrium used as the simulation workload...\n");
    const EquilibriumSolution eq = solve_equilibrium(params, M, default_initial_guess(params, M));
    std::printf("converged in %d iterations\n\n", eq.trace.iterations);

#ifdef _OPENMP
    std::printf("omp max threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both paths run serially\n");
#endif
    std::printf("n_firms: %zu, repeats: %d (best-of reported)\n\n",
                static_cast<std::size_t>(sim.n_firms), repeats);

    DistributionPath par, ser;
    const double t_par = best_of(
        repeats, [&] { par = simulate_population(params, eq.policy, eq.p_bar, M, sim); });
    const double t_ser = best_of(repeats, [&] {
        ser = simulate_population_serial(params, eq.policy, eq.p_bar, M, sim);
    });

    std::printf("threaded kernel: %8.3f s\n", t_par);
    std::printf("serial kernel:   %8.3f s\n", t_ser);
    std::printf("speedup:         %8.2fx\n", t_ser / t_par);
    std::printf("outputs bitwise identical: %s\n", identical(par, ser) ? "yes" : "NO");
    return identical(par, ser) ? 0 : 1;
}
