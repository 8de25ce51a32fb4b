#pragma once

#include "mfp/types.hpp"

namespace mfp {

/// @brief Forward distribution solve for given sale intensities.
///
/// Integrates dm_K/dt = -lambda_K m_K,
///            dm_k/dt = lambda_{k+1} m_{k+1} - lambda_k m_k  (0 < k < K),
///            dm_0/dt = lambda_1 m_1
/// from m(0) = M with the same adaptive 5(4) scheme as the backward solve;
/// intensities are linearly interpolated between grid nodes. Negative
/// round-off entries are clamped (and the column renormalized) only when the
/// column sum has drifted by more than 1e-9, so genuine solver defects stay
/// visible to the invariant checks.
/// @param lambdas K x (n_steps+1) grid, row k-1 driving level k.
DistributionPath solve_kolmogorov(const ModelParams& params, const Grid2D& lambdas,
                                  const InitialDistribution& M);

}  // namespace mfp
