#pragma once

namespace mfp {

/// @brief Explicit sufficient bound on epsilon for equilibrium existence:
/// C1 = min{1 + K*T, sqrt(r)} / (K^2 * T * 2^(K+8)).
/// Evaluated via ldexp so large K underflows gracefully to 0 instead of
/// overflowing; pair with existence_bound_log10 when the value underflows.
double existence_bound(int K, double T, double r);

/// log10 of the existence bound, computed in log space (finite for K well
/// beyond the range where the bound itself underflows).
double existence_bound_log10(int K, double T, double r);

/// @brief Explicit sufficient bound on epsilon for equilibrium uniqueness:
/// C2 = 2/(K-1). For K = 1 the constraint is vacuous and +infinity is
/// returned as the sentinel.
double uniqueness_bound(int K);

/// Demand coefficients of the N-player market, player n of N.
struct FinitePlayerCoefficients {
    double a;
    double b;
    double c;
};

/// @brief Finite-player demand coefficients
///   a_n = 1 / (1 + eps*(n-1)/(N-1)),
///   b_n = (1 + eps*(n-2)/(N-1)) / ((1 + eps*(n-1)/(N-1)) * (1 - eps/(N-1))),
///   c_n = (eps*(n-1)/(N-1)) / ((1 + eps*(n-1)/(N-1)) * (1 - eps/(N-1))).
/// As N grows with n/N -> eta they converge to demand_coefficients(eta, eps)
/// (and b_n -> 1) at rate O(1/N).
/// @throws std::invalid_argument unless 1 <= n <= N, N >= 2 and
/// 0 <= epsilon < N-1 (so that 1 - eps/(N-1) stays positive).
FinitePlayerCoefficients finite_player_coefficients(int n, int N, double epsilon);

}  // namespace mfp
