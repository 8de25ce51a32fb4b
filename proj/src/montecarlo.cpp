#include "mfp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mfp/rng.hpp"

namespace mfp {

namespace {

// Firms per RNG stream. The partition is part of the output contract: counts
// are accumulated per block and merged in index order, so the result depends
// only on (seed, n_firms), never on the thread count.
constexpr long kBlockFirms = 4096;

constexpr double kMaxSaleProbPerStep = 0.05;

struct SimPlan {
    int K = 0;
    int n = 0;
    double dt = 0.0;
    int substeps = 0;
    double dt_sub = 0.0;
    long n_firms = 0;
    std::uint64_t seed = 0;
};

SimPlan make_plan(const ModelParams& params, const PolicyPath& policy,
                  const MeanPricePath& p_bar, const InitialDistribution& M,
                  const SimConfig& cfg) {
    params.validate();
    M.validate();
    const std::size_t cols = static_cast<std::size_t>(params.n_steps) + 1;
    if (M.M.size() != static_cast<std::size_t>(params.K) + 1)
        throw std::invalid_argument("initial_distribution: expected K+1 entries");
    if (policy.prices.rows() != static_cast<std::size_t>(params.K) ||
        policy.prices.cols() != cols || !policy.prices.same_shape(policy.intensities))
        throw std::invalid_argument("policy: expected K x (n_steps+1) grids");
    if (p_bar.values.size() != cols)
        throw std::invalid_argument("p_bar: expected n_steps+1 samples");
    if (cfg.n_firms < 1) throw std::invalid_argument("n_firms: must be >= 1");

    SimPlan plan;
    plan.K = params.K;
    plan.n = params.n_steps;
    plan.dt = params.dt();
    plan.n_firms = cfg.n_firms;
    plan.seed = cfg.seed;

    double dt_sim = cfg.dt_sim > 0.0 ? cfg.dt_sim : plan.dt / 10.0;
    if (dt_sim > plan.dt) dt_sim = plan.dt;
    plan.substeps = std::max(1, static_cast<int>(std::ceil(plan.dt / dt_sim - 1e-12)));
    plan.dt_sub = plan.dt / plan.substeps;

    double lam_max = 0.0;
    for (std::size_t idx = 0; idx < policy.intensities.rows() * policy.intensities.cols(); ++idx)
        lam_max = std::max(lam_max, policy.intensities.data()[idx]);
    if (plan.dt_sub * lam_max > kMaxSaleProbPerStep + 1e-12)
        throw std::invalid_argument("dt_sim: dt_sim * max intensity exceeds 0.05");
    return plan;
}

std::uint64_t block_seed(std::uint64_t seed, long block) {
    return detail::splitmix64(detail::splitmix64(seed) + static_cast<std::uint64_t>(block));
}

// One block of firms, one private RNG stream. Active firms at level k after
// node i increment counts[k * (n+1) + i]; a firm that sells out during cell
// i instead increments absorbed_from[i+1] once and is dropped, since it
// contributes 1 to level 0 at every node from i+1 on (a suffix that is
// cheaper to add once at the end).
void simulate_block(long block, const SimPlan& plan, const Grid2D& lam, const double* cdf,
                    std::vector<std::uint64_t>& counts,
                    std::vector<std::uint64_t>& absorbed_from) {
    const std::size_t n_cols = static_cast<std::size_t>(plan.n) + 1;
    detail::Rng rng(block_seed(plan.seed, block));
    const long first = block * kBlockFirms;
    const long last = std::min(plan.n_firms, first + kBlockFirms);
    const double dt_sub = plan.dt_sub;
    const int S = plan.substeps;

    for (long f = first; f < last; ++f) {
        const double u0 = rng.next_unit();
        int k = 0;
        while (k < plan.K && u0 >= cdf[k]) ++k;
        if (k == 0) {
            ++absorbed_from[0];
            continue;
        }
        ++counts[static_cast<std::size_t>(k) * n_cols];
        for (int i = 0; i < plan.n && k > 0; ++i) {
            for (int s = 0; s < S && k > 0; ++s) {
                const std::size_t row = static_cast<std::size_t>(k - 1);
                const double lam0 = lam(row, static_cast<std::size_t>(i));
                const double slope = lam(row, static_cast<std::size_t>(i) + 1) - lam0;
                const double la = lam0 + (static_cast<double>(s) / S) * slope;
                const double lb = lam0 + (static_cast<double>(s + 1) / S) * slope;
                const double q = 0.5 * dt_sub * (la + lb);
                if (rng.next_unit() < q) --k;
            }
            if (k == 0)
                ++absorbed_from[static_cast<std::size_t>(i) + 1];
            else
                ++counts[static_cast<std::size_t>(k) * n_cols + static_cast<std::size_t>(i) + 1];
        }
    }
}

DistributionPath run_simulation(const ModelParams& params, const PolicyPath& policy,
                                const MeanPricePath& p_bar, const InitialDistribution& M,
                                const SimConfig& cfg, bool parallel) {
    const SimPlan plan = make_plan(params, policy, p_bar, M, cfg);
    const std::size_t n_cols = static_cast<std::size_t>(plan.n) + 1;
    const std::size_t n_rows = static_cast<std::size_t>(plan.K) + 1;

    std::vector<double> cdf(static_cast<std::size_t>(plan.K) + 1);
    double acc = 0.0;
    for (std::size_t k = 0; k <= static_cast<std::size_t>(plan.K); ++k) {
        acc += M.M[k];
        cdf[k] = acc;
    }
    cdf[static_cast<std::size_t>(plan.K)] = 1.0;

    const long n_blocks = (plan.n_firms + kBlockFirms - 1) / kBlockFirms;
    std::vector<std::uint64_t> counts(n_rows * n_cols, 0);
    std::vector<std::uint64_t> absorbed_from(n_cols, 0);

#pragma omp parallel if (parallel)
    {
        std::vector<std::uint64_t> local_counts(n_rows * n_cols, 0);
        std::vector<std::uint64_t> local_absorbed(n_cols, 0);
#pragma omp for schedule(dynamic) nowait
        for (long b = 0; b < n_blocks; ++b)
            simulate_block(b, plan, policy.intensities, cdf.data(), local_counts, local_absorbed);
#pragma omp critical(mfp_sim_merge)
        {
            for (std::size_t idx = 0; idx < local_counts.size(); ++idx)
                counts[idx] += local_counts[idx];
            for (std::size_t i = 0; i < n_cols; ++i) absorbed_from[i] += local_absorbed[i];
        }
    }

    std::uint64_t absorbed = 0;
    for (std::size_t i = 0; i < n_cols; ++i) {
        absorbed += absorbed_from[i];
        counts[i] = absorbed;
    }

    DistributionPath out;
    out.values = Grid2D(n_rows, n_cols);
    const double scale = 1.0 / static_cast<double>(plan.n_firms);
    for (std::size_t k = 0; k < n_rows; ++k)
        for (std::size_t i = 0; i < n_cols; ++i)
            out.values(k, i) = static_cast<double>(counts[k * n_cols + i]) * scale;
    return out;
}

}  // namespace

DistributionPath simulate_population(const ModelParams& params, const PolicyPath& policy,
                                     const MeanPricePath& p_bar, const InitialDistribution& M,
                                     const SimConfig& cfg) {
    return run_simulation(params, policy, p_bar, M, cfg, true);
}

DistributionPath simulate_population_serial(const ModelParams& params, const PolicyPath& policy,
                                            const MeanPricePath& p_bar,
                                            const InitialDistribution& M, const SimConfig& cfg) {
    return run_simulation(params, policy, p_bar, M, cfg, false);
}

double empirical_vs_ode(const DistributionPath& mc, const DistributionPath& ode) {
    if (!mc.values.same_shape(ode.values))
        throw std::invalid_argument("empirical_vs_ode: grid shapes differ");
    double sup = 0.0;
    const std::size_t total = mc.values.rows() * mc.values.cols();
    for (std::size_t idx = 0; idx < total; ++idx)
        sup = std::max(sup, std::abs(mc.values.data()[idx] - ode.values.data()[idx]));
    return sup;
}

}  // namespace mfp
