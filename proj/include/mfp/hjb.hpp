#pragma once

#include "mfp/types.hpp"

namespace mfp {

/// @brief Backward value-function solve against an exogenous market flow.
///
/// Integrates the K coupled backward equations
///   dV_k/dt = r V_k - sup_p lambda(p, p_bar(t), m(t)) (p - delta_v_k)
/// from V_k(T) = 0, with the supremum in closed form via optimal_price.
/// Dormand-Prince 5(4) with rtol 1e-8 / atol 1e-10; p_bar and m are read
/// between grid nodes by linear interpolation; the result is sampled back
/// onto the uniform grid.
/// @throws SolverError if the integration fails (non-finite inputs).
ValuePath solve_hjb(const ModelParams& params, const MeanPricePath& p_bar,
                    const DistributionPath& m);

/// @brief Optimal prices and realized intensities on the grid implied by a
/// value path: p*_k = optimal_price(delta_v_k, p_bar, eta, epsilon) and
/// lambda*_k = intensity(p*_k, ...).
PolicyPath extract_policy(const ValuePath& V, const MeanPricePath& p_bar,
                          const DistributionPath& m, const ModelParams& params);

}  // namespace mfp
