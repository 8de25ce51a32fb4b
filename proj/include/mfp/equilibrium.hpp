#pragma once

#include <cstdint>

#include "mfp/types.hpp"

namespace mfp {

/// Per-iteration errors of the fixed-point loop.
struct IterationTrace {
    std::vector<double> errors;
    int iterations = 0;
    bool converged = false;
};

/// A converged (or best-effort) market equilibrium.
struct EquilibriumSolution {
    ValuePath V;
    DistributionPath m;
    MeanPricePath p_bar;
    PolicyPath policy;
    IterationTrace trace;
};

/// A (mean price, distribution) iterate of the fixed-point loop.
struct Guess {
    MeanPricePath p_bar;
    DistributionPath m;
};

/// @brief Squared-L2 iterate distance used as the termination metric:
/// integral of |p_bar_a - p_bar_b|^2 plus the sum over all levels k of the
/// integral of |m_k_a - m_k_b|^2, trapezoidal quadrature with spacing dt.
/// @throws std::invalid_argument on grid shape mismatch.
double distance(const Guess& a, const Guess& b, double dt);

/// Deterministic starting point: p_bar identically 1/2 (the terminal
/// monopoly price) and the distribution frozen at M.
Guess default_initial_guess(const ModelParams& params, const InitialDistribution& M);

/// @brief Reproducible random starting point: p_bar nodes i.i.d. uniform on
/// [0,1], each distribution column i.i.d. uniform on the simplex (normalized
/// exponentials). Identical seeds give bit-identical output. Draw order:
/// all p_bar nodes first, then distribution columns left to right.
Guess random_initial_guess(const ModelParams& params, const InitialDistribution& M,
                           std::uint64_t seed);

/// @brief Fixed-point loop coupling the backward and forward solves.
///
/// Each sweep solves values against the posited market flow, extracts the
/// policy, pushes the distribution forward under that policy, and re-averages
/// the mean price over the new distribution; terminates when the iterate
/// distance falls below params.tol or after params.max_iters sweeps. On
/// non-convergence the best (smallest-distance) iterate is returned with
/// trace.converged = false; no exception is thrown. Where the active mass at
/// a node falls below kEtaFloor, the updated mean price carries forward its
/// previous-time value (the market is closed there and the price no longer
/// affects the dynamics).
///
/// The returned V and policy are recomputed once from the final (p_bar, m)
/// so that all components describe the same iterate.
///
/// @param relaxation optional damping of the iterate update (new = (1-w) old
/// + w proposed); 1.0 reproduces the plain fixed-point map. Values below 1
/// can stabilize strongly coupled markets and are an extension beyond the
/// reference algorithm.
EquilibriumSolution solve_equilibrium(const ModelParams& params, const InitialDistribution& M,
                                      const Guess& guess, double relaxation = 1.0);

}  // namespace mfp
