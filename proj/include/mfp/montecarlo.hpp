#pragma once

#include <cstdint>

#include "mfp/types.hpp"

namespace mfp {

/// Population simulation settings.
///
/// dt_sim <= 0 selects the default substep of one tenth of the grid spacing.
/// The invariant dt_sim * max lambda <= 0.05 keeps the per-substep Bernoulli
/// approximation of the sale counting process within the target accuracy.
struct SimConfig {
    long n_firms = 100000;
    std::uint64_t seed = 0;
    double dt_sim = 0.0;
};

/// @brief Simulates n_firms independent firms following the given policy.
///
/// Each firm draws its initial level from M, then steps through the horizon
/// in substeps of dt_sim; a firm at level k > 0 sells one unit in a substep
/// with probability equal to the integral of the (linearly interpolated)
/// intensity lambda*_k over the substep, which matches the first moment of
/// the forward flow exactly. Sold-out firms are absorbed at level 0. Returns
/// the empirical distribution (counts / n_firms) sampled on the model grid.
///
/// Firms are partitioned into fixed-size blocks; each block draws from its
/// own stream seeded by mixing (seed, block index), and per-block integer
/// counts are summed at the end, so the result is bit-identical for any
/// number of OpenMP threads, and identical to simulate_population_serial.
/// @throws std::invalid_argument if dt_sim * max lambda exceeds 0.05.
DistributionPath simulate_population(const ModelParams& params, const PolicyPath& policy,
                                     const MeanPricePath& p_bar, const InitialDistribution& M,
                                     const SimConfig& cfg);

/// Single-threaded reference implementation of the same scheme; kept for
/// testing the parallel kernel (outputs must be bit-identical).
DistributionPath simulate_population_serial(const ModelParams& params, const PolicyPath& policy,
                                            const MeanPricePath& p_bar,
                                            const InitialDistribution& M, const SimConfig& cfg);

/// Sup over all (level, node) cells of |empirical - ode|.
/// @throws std::invalid_argument on shape mismatch.
double empirical_vs_ode(const DistributionPath& mc, const DistributionPath& ode);

}  // namespace mfp
