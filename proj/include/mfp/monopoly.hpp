#pragma once

#include "mfp/types.hpp"

namespace mfp {

/// Constants of the zero-competition (monopoly) Riccati solution.
///
/// theta = sqrt(r^2 + r), rho = theta - r, and A1 < 1 < B1 are the roots of
/// the stationary Riccati polynomial; A1 * B1 = 1 and A1 = 1 - 2*rho.
struct MonopolyConstants {
    double rho;
    double theta;
    double A1;
    double B1;
};

/// @throws std::invalid_argument for r <= 0.
MonopolyConstants monopoly_constants(double r);

/// @brief Closed-form marginal value of the last unit at zero competition.
///
/// delta_v1(t) = A1 * (1 - e^{-theta (T-t)}) / (1 - (A1/B1) e^{-theta (T-t)}).
/// Solves d(delta_v1)/dt + (A1 - delta_v1)(B1 - delta_v1)/4 = 0 with
/// delta_v1(T) = 0, the scalar Riccati equation of the single-unit firm.
/// (A common textbook variant of this formula fails the terminal condition;
/// the form above is verified against direct integration in the tests.)
/// @throws std::invalid_argument for t outside [0, T].
double delta_v1_closed_form(double t, const ModelParams& params);

/// @brief Semi-analytic value functions at zero competition.
///
/// Integrates the marginal-value chain level by level: each delta_v_k solves
/// a scalar Riccati equation sourced by delta_v_{k-1}. Levels are stored with
/// their derivatives on an internally refined grid and passed to the next
/// level through cubic Hermite interpolation, keeping the accumulated error
/// across all K levels well below 1e-6. epsilon in params is ignored.
ValuePath solve_monopoly_value(const ModelParams& params);

/// @brief Distribution flow by quadrature of the variation-of-constants
/// solution of the forward system, level by level from k = K down.
///
/// The integrating factors are applied per grid interval (algebraically
/// identical to the global form but immune to overflow of e^{+int lambda}),
/// with trapezoidal quadrature. Row 0 is filled as 1 - sum of the others,
/// which keeps total mass exactly 1. Accuracy of the levels is O(dt^2) on
/// the model grid; use solve_kolmogorov when sub-1e-6 accuracy is needed at
/// coarse spacing.
/// @param lambdas K x (n_steps+1) intensities, row k-1 driving level k.
DistributionPath solve_monopoly_distribution(const ModelParams& params,
                                             const InitialDistribution& M,
                                             const Grid2D& lambdas);

/// Worst-case violations of the zero-competition solution bounds. Each field
/// is 0 when the bound holds and the (positive) overshoot otherwise.
struct BoundReport {
    double dv_below = 0.0;       // delta_v_k < 0
    double dv_above = 0.0;       // delta_v_k > 1 - 2*rho
    double dv_growth = 0.0;      // forward-difference d(delta_v_k)/dt > 0
    double lambda_below = 0.0;   // lambda_k < rho
    double lambda_above = 0.0;   // lambda_k > 1/2
    double m_below = 0.0;        // m_k < 0
    double m_above = 0.0;        // m_k > 1
    double mass_error = 0.0;     // max |column sum - 1|

    double max_violation() const;
};

/// @brief Checks the four bound families of the zero-competition solution:
/// 0 <= delta_v_k <= 1-2*rho, d(delta_v_k)/dt <= 0, lambda_k in [rho, 1/2],
/// and m_k in [0, 1] with unit column mass. Intensities are reconstructed
/// from V as lambda_k = (1 - delta_v_k)/2.
BoundReport check_proposition1(const ValuePath& V, const DistributionPath& m,
                               const ModelParams& params);

}  // namespace mfp
