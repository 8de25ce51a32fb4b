#pragma once

#include <vector>

#include "mfp/types.hpp"

namespace mfp {

/// Active mass below which the mean market price is undefined: the market
/// is effectively closed and callers hold the price at its last value.
inline constexpr double kEtaFloor = 1e-12;

/// Demand coefficients of the piecewise linear intensity,
/// lambda(p) = (a - p + c * p_bar)+ with a + c = 1.
struct DemandCoefficients {
    double a;
    double c;
};

/// @brief Fraction of firms still holding inventory.
/// @param m distribution column over levels 0..K; must sum to 1 within 1e-6.
/// @return eta = sum over k >= 1 of m_k.
/// @throws std::invalid_argument on entries below -1e-8 or a bad mass sum.
double active_fraction(const std::vector<double>& m);

/// @brief Demand coefficients as a function of active mass and competition.
///
/// a = 1/(1 + epsilon*eta), c = epsilon*eta/(1 + epsilon*eta). Competition
/// shrinks own-demand (a) and introduces cross-demand (c); a + c = 1.
DemandCoefficients demand_coefficients(double eta, double epsilon);

/// @brief Instantaneous sale intensity at price p given market state.
/// @return (a - p + c * p_bar)+, always nonnegative.
double intensity(double p, double p_bar, double eta, double epsilon);

/// Same, with precomputed demand coefficients (hot loops).
double intensity(double p, double p_bar, const DemandCoefficients& dc);

/// @brief Revenue-maximizing price for a firm whose marginal inventory
/// value is delta_v: argmax over p >= 0 of lambda(p) * (p - delta_v).
/// @return (a + c * p_bar + delta_v)/2, clamped at zero.
double optimal_price(double delta_v, double p_bar, double eta, double epsilon);

/// Same, with precomputed demand coefficients.
double optimal_price(double delta_v, double p_bar, const DemandCoefficients& dc);

/// @brief Mean price across active firms: (1/eta) * sum_{k>=1} m_k p_k.
/// Sold-out firms (k = 0) are excluded.
/// @param m      distribution column over levels 0..K.
/// @param prices K prices, entry j quoting level j+1.
/// @throws DegenerateMarketError when eta <= kEtaFloor.
double mean_price(const std::vector<double>& m, const std::vector<double>& prices);

/// @brief Mean price implied directly by the marginal values, obtained by
/// substituting the optimal-price formula into the weighted average and
/// solving the resulting affine fixed point:
/// (a + (1/eta) * sum m_k delta_v_k) / (2 - c).
/// Consistency oracle only; the iteration loop never calls it.
/// @throws DegenerateMarketError when eta <= kEtaFloor.
double equilibrium_mean_price(const std::vector<double>& m, const std::vector<double>& delta_vs,
                              double epsilon);

/// @brief Auxiliary equilibrium functional
/// (sum m_k delta_v_k - eta) / (2 + epsilon * eta).
double phi_eps(const std::vector<double>& m, const std::vector<double>& delta_vs, double epsilon);

}  // namespace mfp
