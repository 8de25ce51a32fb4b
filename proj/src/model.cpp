#include "mfp/model.hpp"

#include <cmath>

namespace mfp {

namespace {

// eta and the inner product sum(m_k * x_{k-1}) over active levels, shared by
// the price aggregates below. x has K entries, entry j belonging to level j+1.
struct ActiveMoments {
    double eta;
    double weighted;
};

ActiveMoments active_moments(const std::vector<double>& m, const std::vector<double>& x) {
    if (m.size() != x.size() + 1)
        throw std::invalid_argument("m: expected one more entry than the per-level vector");
    ActiveMoments mom{0.0, 0.0};
    for (std::size_t k = 1; k < m.size(); ++k) {
        mom.eta += m[k];
        mom.weighted += m[k] * x[k - 1];
    }
    return mom;
}

}  // namespace

double active_fraction(const std::vector<double>& m) {
    if (m.empty()) throw std::invalid_argument("m: empty distribution column");
    double total = 0.0;
    double active = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (m[k] < -1e-8) throw std::invalid_argument("m: negative entry below -1e-8");
        total += m[k];
        if (k >= 1) active += m[k];
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument("m: column mass differs from 1 by more than 1e-6");
    return active;
}

DemandCoefficients demand_coefficients(double eta, double epsilon) {
    const double s = epsilon * eta;
    const double a = 1.0 / (1.0 + s);
    return {a, s * a};
}

double intensity(double p, double p_bar, double eta, double epsilon) {
    return intensity(p, p_bar, demand_coefficients(eta, epsilon));
}

double intensity(double p, double p_bar, const DemandCoefficients& dc) {
    const double lam = dc.a - p + dc.c * p_bar;
    return lam > 0.0 ? lam : 0.0;
}

double optimal_price(double delta_v, double p_bar, double eta, double epsilon) {
    return optimal_price(delta_v, p_bar, demand_coefficients(eta, epsilon));
}

double optimal_price(double delta_v, double p_bar, const DemandCoefficients& dc) {
    const double p = 0.5 * (dc.a + dc.c * p_bar + delta_v);
    return p > 0.0 ? p : 0.0;
}

double mean_price(const std::vector<double>& m, const std::vector<double>& prices) {
    const ActiveMoments mom = active_moments(m, prices);
    if (mom.eta <= kEtaFloor)
        throw DegenerateMarketError("mean_price: active mass at or below the eta floor");
    return mom.weighted / mom.eta;
}

double equilibrium_mean_price(const std::vector<double>& m, const std::vector<double>& delta_vs,
                              double epsilon) {
    const ActiveMoments mom = active_moments(m, delta_vs);
    if (mom.eta <= kEtaFloor)
        throw DegenerateMarketError("equilibrium_mean_price: active mass at or below the eta floor");
    const DemandCoefficients dc = demand_coefficients(mom.eta, epsilon);
    return (dc.a + mom.weighted / mom.eta) / (2.0 - dc.c);
}

double phi_eps(const std::vector<double>& m, const std::vector<double>& delta_vs, double epsilon) {
    const ActiveMoments mom = active_moments(m, delta_vs);
    return (mom.weighted - mom.eta) / (2.0 + epsilon * mom.eta);
}

}  // namespace mfp
